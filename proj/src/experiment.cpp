#include "qwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "qwalk/entanglement.hpp"

namespace qwalk {

namespace {

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

bool active(const ExperimentConfig& cfg, Observable obs) { return (cfg.observables & obs) != 0; }

// Cheap runtime sanity check on the evolving state; a violation indicates an
// internal defect, not a bad configuration, and maps to CLI exit code 4.
void check_state_sanity(const DensityOperator& rho, int t) {
    const double trace_err = std::abs(trace_real(rho.m) - 1.0);
    if (trace_err > 1e-9) {
        throw InternalInvariantViolation("trace drifted by " + fmt_g(trace_err) + " at step " +
                                         std::to_string(t));
    }
    const double herm_err = hermiticity_deviation(rho.m);
    if (herm_err > 1e-9) {
        throw InternalInvariantViolation("Hermiticity drifted by " + fmt_g(herm_err) +
                                         " at step " + std::to_string(t));
    }
}

SeriesCell negativity_cell(const DensityOperator& rho) {
    if (auto nv = negativity(rho)) {
        return {SeriesCell::Kind::Value, nv->value};
    }
    return {SeriesCell::Kind::Missing, 0.0};
}

struct SeriesFlags {
    bool tvd = false;       // series needed (requested or feeding a mixing time)
    bool tavg = false;      // likewise for the running time-average
    bool sigma = false;
    bool neg = false;
    bool dist = false;
};

SeriesFlags flags_for(const ExperimentConfig& cfg) {
    SeriesFlags f;
    f.tvd = active(cfg, kObsTvd) || active(cfg, kObsMixingTime);
    f.tavg = active(cfg, kObsTvdTimeAvg) || active(cfg, kObsMixingTimeTimeAvg);
    f.sigma = active(cfg, kObsSigma);
    f.neg = active(cfg, kObsNegativity);
    f.dist = active(cfg, kObsDistribution);
    return f;
}

PointSummary summarize(const ExperimentConfig& cfg, const PointSeries& ps, double p) {
    PointSummary s;
    s.p = p;
    if (active(cfg, kObsTvd) && !ps.tvd.empty()) s.final_tvd = ps.tvd.back();
    if (active(cfg, kObsNegativity) && !ps.negativity.empty()) {
        s.final_negativity = ps.negativity.back();
    }
    s.mixing_requested = active(cfg, kObsMixingTime);
    s.mixing_avg_requested = active(cfg, kObsMixingTimeTimeAvg);
    if (s.mixing_requested) s.mixing_time = mixing_time({ps.tvd, cfg.epsilon});
    if (s.mixing_avg_requested) s.mixing_time_avg = mixing_time({ps.tvd_timeavg, cfg.epsilon});
    return s;
}

}  // namespace

ConfigError::ConfigError(std::string fld, const std::string& msg)
    : std::invalid_argument(fld + ": " + msg), field(std::move(fld)) {}

IoError::IoError(std::string p, const std::string& msg)
    : std::runtime_error(msg + " (" + p + ")"), path(std::move(p)) {}

void validate(const ExperimentConfig& cfg) {
    if (cfg.geometry == GeometryKind::Line) {
        if (cfg.steps < 1) throw ConfigError("steps", "a line walk needs steps >= 1");
    } else {
        if (cfg.sites < 2) throw ConfigError("size", "a cycle needs at least 2 sites");
        if (active(cfg, kObsSigma)) {
            throw ConfigError("observables", "sigma is defined for line walks only");
        }
    }
    if (cfg.p_grid.empty()) throw ConfigError("p-grid", "at least one decoherence rate required");
    double prev = -1.0;
    for (double p : cfg.p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p-grid", "rates must lie in [0,1]");
        if (!(p > prev)) throw ConfigError("p-grid", "rates must be strictly increasing");
        prev = p;
    }
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "threshold must be positive");
    if (cfg.neg_stride < 0) throw ConfigError("neg-every", "stride must be >= 0");
}

int effective_horizon(const ExperimentConfig& cfg) {
    if (cfg.geometry == GeometryKind::Line) {
        // The window is sized for `steps` steps; the series cannot run longer.
        return cfg.horizon > 0 ? std::min(cfg.horizon, cfg.steps) : cfg.steps;
    }
    return cfg.horizon > 0 ? cfg.horizon : 20 * cfg.sites;
}

SweepResult run_line_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.geometry != GeometryKind::Line) throw ConfigError("geometry", "expected a line run");

    const WalkGeometry geom = WalkGeometry::line(cfg.steps);
    const int steps = cfg.steps;
    const SeriesFlags want = flags_for(cfg);
    const ReferenceDistribution ref = top_hat_reference(geom, steps);

    SweepResult result;
    result.cfg = cfg;
    result.horizon = effective_horizon(cfg);

    for (double p : cfg.p_grid) {
        PointSeries ps;
        ps.p = p;
        std::vector<double> running(static_cast<size_t>(geom.position_count), 0.0);

        Observer record = [&](int t, const DensityOperator& rho) {
            if (t % 64 == 0 || t == steps) check_state_sanity(rho, t);
            const ProbabilityDistribution m = position_marginal(rho);
            if (want.tvd) ps.tvd.push_back(tvd(m, ref));
            if (want.tavg) {
                for (size_t i = 0; i < running.size(); ++i) running[i] += m.w[i];
                ProbabilityDistribution avg{geom, running};
                const double inv = 1.0 / static_cast<double>(t + 1);
                for (double& w : avg.w) w *= inv;
                ps.tvd_timeavg.push_back(tvd(avg, ref));
            }
            if (want.sigma) ps.sigma.push_back(std_dev(m));
            if (want.neg) {
                const bool due =
                    t == steps || (cfg.neg_stride >= 1 && t % cfg.neg_stride == 0);
                ps.negativity.push_back(due ? negativity_cell(rho)
                                            : SeriesCell{SeriesCell::Kind::Empty, 0.0});
            }
            if (want.dist) ps.dists.push_back(m);
        };

        evolve(make_initial_state(geom, cfg.coin_init), {cfg.target, p}, steps, {record});
        result.summary.push_back(summarize(cfg, ps, p));
        result.series.push_back(std::move(ps));
    }
    return result;
}

SweepResult run_cycle_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.geometry != GeometryKind::Cycle) throw ConfigError("geometry", "expected a cycle run");

    const WalkGeometry geom = WalkGeometry::cycle(cfg.sites);
    const SeriesFlags want = flags_for(cfg);
    const int horizon = effective_horizon(cfg);
    const bool even = cfg.sites % 2 == 0;

    const ReferenceDistribution uniform = uniform_cycle(geom);
    // Instantaneous mixing on an even cycle is judged against the uniform
    // distribution over sites of the walker's current parity; the running
    // time-average always targets the full uniform distribution.
    std::vector<ReferenceDistribution> parity_refs;
    if (even) {
        parity_refs.push_back(parity_uniform_cycle(geom, 0));
        parity_refs.push_back(parity_uniform_cycle(geom, 1));
    }

    SweepResult result;
    result.cfg = cfg;
    result.horizon = horizon;

    for (double p : cfg.p_grid) {
        PointSeries ps;
        ps.p = p;
        std::vector<double> running(static_cast<size_t>(geom.position_count), 0.0);

        Observer record = [&](int t, const DensityOperator& rho) {
            if (t % 64 == 0 || t == horizon) check_state_sanity(rho, t);
            const ProbabilityDistribution m = position_marginal(rho);
            if (want.tvd) {
                const ReferenceDistribution& r = even ? parity_refs[t & 1] : uniform;
                ps.tvd.push_back(tvd(m, r));
            }
            if (want.tavg) {
                for (size_t i = 0; i < running.size(); ++i) running[i] += m.w[i];
                ProbabilityDistribution avg{geom, running};
                const double inv = 1.0 / static_cast<double>(t + 1);
                for (double& w : avg.w) w *= inv;
                ps.tvd_timeavg.push_back(tvd(avg, uniform));
            }
            // Cycle states stay small (d <= ~102), so negativity is evaluated
            // at every step when requested; the line stride does not apply.
            if (want.neg) ps.negativity.push_back(negativity_cell(rho));
            if (want.dist) ps.dists.push_back(m);
        };

        evolve(make_initial_state(geom, cfg.coin_init), {cfg.target, p}, horizon, {record});
        result.summary.push_back(summarize(cfg, ps, p));
        result.series.push_back(std::move(ps));
    }
    return result;
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
    return cfg.geometry == GeometryKind::Line ? run_line_experiment(cfg)
                                              : run_cycle_experiment(cfg);
}

std::string to_string(DecoherenceTarget t) {
    switch (t) {
        case DecoherenceTarget::None: return "none";
        case DecoherenceTarget::CoinOnly: return "coin";
        case DecoherenceTarget::PositionOnly: return "position";
        case DecoherenceTarget::Both: return "both";
    }
    return "?";
}

std::string to_string(CoinInit c) {
    switch (c) {
        case CoinInit::SymmetricPhase: return "phase";
        case CoinInit::SymmetricAngle: return "angle";
        case CoinInit::BasisMinus: return "minus";
        case CoinInit::BasisPlus: return "plus";
    }
    return "?";
}

DecoherenceTarget target_from_string(const std::string& s) {
    if (s == "none") return DecoherenceTarget::None;
    if (s == "coin") return DecoherenceTarget::CoinOnly;
    if (s == "position") return DecoherenceTarget::PositionOnly;
    if (s == "both") return DecoherenceTarget::Both;
    throw ConfigError("decohere", "unknown channel '" + s + "'");
}

CoinInit coin_init_from_string(const std::string& s) {
    if (s == "phase") return CoinInit::SymmetricPhase;
    if (s == "angle") return CoinInit::SymmetricAngle;
    if (s == "minus") return CoinInit::BasisMinus;
    if (s == "plus") return CoinInit::BasisPlus;
    throw ConfigError("coin-init", "unknown coin start '" + s + "'");
}

namespace {
const std::pair<const char*, Observable> kObservableNames[] = {
    {"distribution", kObsDistribution},
    {"sigma", kObsSigma},
    {"tvd", kObsTvd},
    {"tvd_timeavg", kObsTvdTimeAvg},
    {"negativity", kObsNegativity},
    {"mixing_time", kObsMixingTime},
    {"mixing_time_timeavg", kObsMixingTimeTimeAvg},
};
}  // namespace

std::string observables_to_string(unsigned mask) {
    std::string out;
    for (const auto& [name, bit] : kObservableNames) {
        if (mask & bit) {
            if (!out.empty()) out += ',';
            out += name;
        }
    }
    return out;
}

unsigned observables_from_string(const std::string& csv_list) {
    unsigned mask = 0;
    std::string token;
    std::istringstream in(csv_list);
    while (std::getline(in, token, ',')) {
        const auto start = token.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto stop = token.find_last_not_of(" \t");
        const std::string name = token.substr(start, stop - start + 1);
        bool known = false;
        for (const auto& [candidate, bit] : kObservableNames) {
            if (name == candidate) {
                mask |= bit;
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("observables", "unknown observable '" + name + "'");
    }
    return mask;
}

std::string config_echo(const ExperimentConfig& cfg) {
    std::string out;
    if (cfg.geometry == GeometryKind::Line) {
        out += "geometry=line steps=" + std::to_string(cfg.steps);
    } else {
        out += "geometry=cycle size=" + std::to_string(cfg.sites);
    }
    out += " coin_init=" + to_string(cfg.coin_init);
    out += " decohere=" + to_string(cfg.target);
    out += " epsilon=" + fmt_g(cfg.epsilon);
    out += " neg_every=" + std::to_string(cfg.neg_stride);
    out += " observables=" + observables_to_string(cfg.observables);
    out += " p_grid=";
    for (size_t i = 0; i < cfg.p_grid.size(); ++i) {
        if (i) out += ',';
        out += fmt_g(cfg.p_grid[i]);
    }
    return out;
}

namespace {

void write_or_cleanup(const std::string& path, const std::string& body,
                      const std::vector<std::string>& all_paths) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) {
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        out.flush();
    }
    if (!out) {
        for (const std::string& p : all_paths) std::remove(p.c_str());
        throw IoError(path, "cannot write CSV output");
    }
}

std::string metadata_block(const SweepResult& result) {
    std::string meta = "# config: " + config_echo(result.cfg) + "\n";
    meta += "# horizon: " + std::to_string(result.horizon) + "\n";
    if (result.cfg.geometry == GeometryKind::Cycle) {
        meta += "# tvd_threshold_1_over_N: " + fmt_g(1.0 / result.cfg.sites) + "\n";
    }
    return meta;
}

}  // namespace

void emit_csv(const SweepResult& result, const std::string& stem) {
    const ExperimentConfig& cfg = result.cfg;
    const std::string series_path = stem + "_series.csv";
    const std::string summary_path = stem + "_summary.csv";
    const std::string dist_path = stem + "_dist.csv";
    std::vector<std::string> paths{series_path, summary_path};
    const bool want_dist = active(cfg, kObsDistribution);
    if (want_dist) paths.push_back(dist_path);

    const std::string meta = metadata_block(result);

    // Series file: rows only when a series-valued observable was requested.
    std::string series = meta;
    series += "p,t,tvd,tvd_timeavg,negativity,sigma\n";
    const bool any_series = active(cfg, kObsTvd) || active(cfg, kObsTvdTimeAvg) ||
                            active(cfg, kObsNegativity) || active(cfg, kObsSigma);
    if (any_series) {
        for (const PointSeries& ps : result.series) {
            const std::string p_str = fmt_g(ps.p);
            for (int t = 0; t <= result.horizon; ++t) {
                const auto u = static_cast<size_t>(t);
                series += p_str;
                series += ',';
                series += std::to_string(t);
                series += ',';
                if (active(cfg, kObsTvd)) series += fmt_g(ps.tvd[u]);
                series += ',';
                if (active(cfg, kObsTvdTimeAvg)) series += fmt_g(ps.tvd_timeavg[u]);
                series += ',';
                if (active(cfg, kObsNegativity)) {
                    const SeriesCell& cell = ps.negativity[u];
                    if (cell.kind == SeriesCell::Kind::Value) series += fmt_g(cell.value);
                    else if (cell.kind == SeriesCell::Kind::Missing) series += "NA";
                }
                series += ',';
                if (active(cfg, kObsSigma)) series += fmt_g(ps.sigma[u]);
                series += '\n';
            }
        }
    }

    std::string summary = meta;
    summary += "p,final_tvd,final_negativity,mixing_time,mixing_time_timeavg\n";
    for (const PointSummary& s : result.summary) {
        summary += fmt_g(s.p);
        summary += ',';
        if (s.final_tvd) summary += fmt_g(*s.final_tvd);
        summary += ',';
        if (s.final_negativity.kind == SeriesCell::Kind::Value) {
            summary += fmt_g(s.final_negativity.value);
        } else if (s.final_negativity.kind == SeriesCell::Kind::Missing) {
            summary += "NA";
        }
        summary += ',';
        if (s.mixing_requested) {
            summary += s.mixing_time ? std::to_string(*s.mixing_time) : std::string("INF");
        }
        summary += ',';
        if (s.mixing_avg_requested) {
            summary += s.mixing_time_avg ? std::to_string(*s.mixing_time_avg)
                                         : std::string("INF");
        }
        summary += '\n';
    }

    write_or_cleanup(series_path, series, paths);
    write_or_cleanup(summary_path, summary, paths);

    if (want_dist) {
        std::string dist = meta;
        dist += "p,t,x,weight\n";
        for (const PointSeries& ps : result.series) {
            const std::string p_str = fmt_g(ps.p);
            for (size_t t = 0; t < ps.dists.size(); ++t) {
                const ProbabilityDistribution& d = ps.dists[t];
                for (int i = 0; i < d.geom.position_count; ++i) {
                    dist += p_str;
                    dist += ',';
                    dist += std::to_string(t);
                    dist += ',';
                    dist += std::to_string(d.geom.label_of(i));
                    dist += ',';
                    dist += fmt_g(d.w[static_cast<size_t>(i)]);
                    dist += '\n';
                }
            }
        }
        write_or_cleanup(dist_path, dist, paths);
    }
}

}  // namespace qwalk
