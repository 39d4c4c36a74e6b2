// Command-line front end: configures a sweep, runs it, writes CSV files.
//
// Exit codes: 0 success (NotMixed / NA outcomes included), 2 configuration
// error, 3 I/O error, 4 internal invariant violation.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/experiment.hpp"

namespace {

struct SubArgs {
    qwalk::ExperimentConfig cfg;
    std::string config_path;
    std::string decohere = "none";
    std::string coin = "phase";
    std::string obs_csv;
    bool obs_given = false;
    std::vector<double> p_list;
    std::vector<double> p_log;  // start stop count

    CLI::Option* steps_opt = nullptr;
    CLI::Option* size_opt = nullptr;
    CLI::Option* neg_opt = nullptr;
    CLI::Option* decohere_opt = nullptr;
    CLI::Option* coin_opt = nullptr;
    CLI::Option* p_list_opt = nullptr;
    CLI::Option* p_log_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* horizon_opt = nullptr;
    CLI::Option* obs_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_common_options(CLI::App* sub, SubArgs& a) {
    sub->add_option("--config", a.config_path,
                    "flat key=value file (keys are the long flag names without dashes); "
                    "flags given on the command line win");
    a.decohere_opt = sub->add_option("--decohere", a.decohere, "decoherence channel")
                         ->check(CLI::IsMember({"none", "coin", "position", "both"}))
                         ->capture_default_str();
    a.coin_opt = sub->add_option("--coin-init", a.coin, "initial coin state")
                     ->check(CLI::IsMember({"phase", "angle", "minus", "plus"}))
                     ->capture_default_str();
    a.p_list_opt = sub->add_option("--p-list", a.p_list,
                                   "explicit decoherence rates (sorted ascending before use)")
                       ->delimiter(',');
    a.p_log_opt = sub->add_option("--p-log", a.p_log,
                                  "log-spaced rates: START STOP COUNT (START, STOP > 0)")
                      ->expected(3)
                      ->delimiter(',');
    a.p_list_opt->excludes(a.p_log_opt);
    a.p_log_opt->excludes(a.p_list_opt);
    a.epsilon_opt = sub->add_option("--epsilon", a.cfg.epsilon,
                                    "mixing threshold on the unhalved TVD")
                        ->capture_default_str();
    a.horizon_opt = sub->add_option("--horizon", a.cfg.horizon,
                                    "mixing-scan horizon in steps (<=0 selects the default)");
    a.obs_opt = sub->add_option(
        "--observables", a.obs_csv,
        "comma-separated subset of distribution,sigma,tvd,tvd_timeavg,negativity,"
        "mixing_time,mixing_time_timeavg (default: a geometry-appropriate set)");
    a.out_opt = sub->add_option("--out", a.cfg.out_stem,
                                "output stem; writes <stem>_series.csv etc. (required)");
}

std::string trimmed(const std::string& s) {
    const size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const size_t last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

int parse_config_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw qwalk::ConfigError(key, "not an integer: '" + value + "'");
    }
    return static_cast<int>(v);
}

double parse_config_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw qwalk::ConfigError(key, "not a number: '" + value + "'");
    }
    return v;
}

std::vector<double> parse_config_doubles(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        out.push_back(parse_config_double(key, trimmed(item)));
    }
    if (out.empty()) throw qwalk::ConfigError(key, "expected at least one number");
    return out;
}

// Merges the flat key=value config file into the parsed arguments. Every
// command-line flag takes precedence over its file counterpart; supplying a
// rate grid on the command line shadows both rate keys in the file.
void apply_config_file(SubArgs& a) {
    if (a.config_path.empty()) return;
    std::ifstream in(a.config_path);
    if (!in.good()) {
        throw qwalk::ConfigError("config", "cannot read '" + a.config_path + "'");
    }
    const bool is_line = a.cfg.geometry == qwalk::GeometryKind::Line;
    std::vector<double> file_p_list, file_p_log;
    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = trimmed(raw);
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw qwalk::ConfigError("config", "expected key=value, got '" + line + "'");
        }
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (key == "steps" && is_line) {
            if (a.steps_opt->count() == 0) a.cfg.steps = parse_config_int(key, value);
        } else if (key == "size" && !is_line) {
            if (a.size_opt->count() == 0) a.cfg.sites = parse_config_int(key, value);
        } else if (key == "neg-every" && is_line) {
            if (a.neg_opt->count() == 0) a.cfg.neg_stride = parse_config_int(key, value);
        } else if (key == "decohere") {
            if (a.decohere_opt->count() == 0) a.decohere = value;
        } else if (key == "coin-init") {
            if (a.coin_opt->count() == 0) a.coin = value;
        } else if (key == "p-list") {
            file_p_list = parse_config_doubles(key, value);
        } else if (key == "p-log") {
            file_p_log = parse_config_doubles(key, value);
        } else if (key == "epsilon") {
            if (a.epsilon_opt->count() == 0) a.cfg.epsilon = parse_config_double(key, value);
        } else if (key == "horizon") {
            if (a.horizon_opt->count() == 0) a.cfg.horizon = parse_config_int(key, value);
        } else if (key == "observables") {
            if (a.obs_opt->count() == 0) {
                a.obs_csv = value;
                a.obs_given = true;
            }
        } else if (key == "out") {
            if (a.out_opt->count() == 0) a.cfg.out_stem = value;
        } else {
            throw qwalk::ConfigError("config", "unknown key '" + key + "'");
        }
    }
    const bool cmd_has_rates = a.p_list_opt->count() > 0 || a.p_log_opt->count() > 0;
    if (!cmd_has_rates) {
        if (!file_p_list.empty() && !file_p_log.empty()) {
            throw qwalk::ConfigError("p-grid", "give either p-list or p-log, not both");
        }
        a.p_list = file_p_list;
        a.p_log = file_p_log;
        if (!a.p_log.empty() && a.p_log.size() != 3) {
            throw qwalk::ConfigError("p-log", "expected START,STOP,COUNT");
        }
    }
}

std::vector<double> log_spaced_grid(const std::vector<double>& spec) {
    const double start = spec[0];
    const double stop = spec[1];
    const double count_raw = spec[2];
    const int count = static_cast<int>(std::llround(count_raw));
    if (count < 1 || std::abs(count_raw - count) > 1e-9) {
        throw qwalk::ConfigError("p-log", "count must be a positive integer");
    }
    if (!(start > 0.0) || !(stop > 0.0)) {
        throw qwalk::ConfigError("p-log", "start and stop must be positive");
    }
    if (count == 1) return {start};
    if (!(start < stop)) throw qwalk::ConfigError("p-log", "start must be less than stop");
    const double la = std::log(start);
    const double lb = std::log(stop);
    std::vector<double> grid(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (count - 1));
    }
    grid.front() = start;  // exact endpoints, no rounding drift
    grid.back() = stop;
    return grid;
}

void finalize_config(SubArgs& a) {
    apply_config_file(a);

    if (a.cfg.geometry == qwalk::GeometryKind::Line && a.steps_opt->count() == 0 &&
        a.cfg.steps == 0) {
        throw qwalk::ConfigError("steps", "required (flag or config key)");
    }
    if (a.cfg.geometry == qwalk::GeometryKind::Cycle && a.size_opt->count() == 0 &&
        a.cfg.sites == 0) {
        throw qwalk::ConfigError("size", "required (flag or config key)");
    }
    if (a.cfg.out_stem.empty()) {
        throw qwalk::ConfigError("out", "required (flag or config key)");
    }

    a.cfg.target = qwalk::target_from_string(a.decohere);
    a.cfg.coin_init = qwalk::coin_init_from_string(a.coin);

    if (a.obs_opt->count() > 0 || a.obs_given) {
        a.cfg.observables = qwalk::observables_from_string(a.obs_csv);
    } else if (a.cfg.geometry == qwalk::GeometryKind::Line) {
        a.cfg.observables = qwalk::kObsSigma | qwalk::kObsTvd | qwalk::kObsTvdTimeAvg |
                            qwalk::kObsNegativity;
    } else {
        a.cfg.observables = qwalk::kObsTvd | qwalk::kObsTvdTimeAvg | qwalk::kObsNegativity |
                            qwalk::kObsMixingTime | qwalk::kObsMixingTimeTimeAvg;
    }

    if (!a.p_list.empty() && !a.p_log.empty()) {
        throw qwalk::ConfigError("p-grid", "give either p-list or p-log, not both");
    }
    if (!a.p_list.empty()) {
        a.cfg.p_grid = a.p_list;
        std::sort(a.cfg.p_grid.begin(), a.cfg.p_grid.end());
    } else if (!a.p_log.empty()) {
        a.cfg.p_grid = log_spaced_grid(a.p_log);
    } else {
        throw qwalk::ConfigError("p-grid", "provide decoherence rates via --p-list or --p-log");
    }
    qwalk::validate(a.cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic coined quantum walk simulator (line and cycle)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qwalk 1.0.0");

    SubArgs line_args;
    line_args.cfg.geometry = qwalk::GeometryKind::Line;
    CLI::App* line = app.add_subcommand("line", "walk on the integer line for a fixed step count");
    line_args.steps_opt = line->add_option("--steps", line_args.cfg.steps,
                                           "number of walk steps T (required)");
    line_args.neg_opt =
        line->add_option("--neg-every", line_args.cfg.neg_stride,
                         "negativity stride: evaluate when t %% stride == 0 and at the final "
                         "step; 0 means final step only")
            ->capture_default_str();
    add_common_options(line, line_args);

    SubArgs cycle_args;
    cycle_args.cfg.geometry = qwalk::GeometryKind::Cycle;
    CLI::App* cycle = app.add_subcommand("cycle", "walk on an N-site cycle up to a mixing horizon");
    cycle_args.size_opt = cycle->add_option("--size", cycle_args.cfg.sites,
                                            "number of cycle sites N (required)");
    add_common_options(cycle, cycle_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    SubArgs& chosen = line->parsed() ? line_args : cycle_args;
    try {
        finalize_config(chosen);
        const qwalk::SweepResult result = qwalk::run_experiment(chosen.cfg);
        qwalk::emit_csv(result, chosen.cfg.out_stem);
        std::cout << "wrote " << chosen.cfg.out_stem << "_series.csv and "
                  << chosen.cfg.out_stem << "_summary.csv";
        if (chosen.cfg.observables & qwalk::kObsDistribution) {
            std::cout << " and " << chosen.cfg.out_stem << "_dist.csv";
        }
        std::cout << "\n";
        return 0;
    } catch (const qwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qwalk::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
