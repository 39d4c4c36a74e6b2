#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/state_space.hpp"

namespace qwalk {

// Requestable per-run measurements. Distribution rows go to a third CSV file
// (the series schema has no position column); everything else lands in the
// series/summary files.
enum Observable : unsigned {
    kObsDistribution = 1u << 0,
    kObsSigma = 1u << 1,
    kObsTvd = 1u << 2,
    kObsTvdTimeAvg = 1u << 3,
    kObsNegativity = 1u << 4,
    kObsMixingTime = 1u << 5,
    kObsMixingTimeTimeAvg = 1u << 6,
};

struct ConfigError : std::invalid_argument {
    std::string field;
    ConfigError(std::string fld, const std::string& msg);
};

struct IoError : std::runtime_error {
    std::string path;
    IoError(std::string p, const std::string& msg);
};

// Raised when a runtime sanity check on the evolving state fails (trace or
// Hermiticity drift far beyond tolerance); maps to the CLI's exit code 4.
struct InternalInvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    GeometryKind geometry = GeometryKind::Line;
    int steps = 0;  // line: walk length T
    int sites = 0;  // cycle: N
    CoinInit coin_init = CoinInit::SymmetricPhase;
    DecoherenceTarget target = DecoherenceTarget::None;
    std::vector<double> p_grid;  // strictly increasing values in [0,1]
    double epsilon = 0.002;
    // Mixing-scan horizon; <= 0 selects the default (cycle: 20N; line: clamped
    // to T regardless, since the window is sized for T steps).
    int horizon = 0;
    unsigned observables = 0;
    // Line negativity stride: evaluate at t % stride == 0 and at the final
    // step; 0 means final step only. Cycles always evaluate every step.
    int neg_stride = 1;
    std::string out_stem;
};

void validate(const ExperimentConfig& cfg);  // throws ConfigError
int effective_horizon(const ExperimentConfig& cfg);

// One cell of an optional-valued series column: not requested at this index
// (empty CSV field), requested but missing (NA), or a value.
struct SeriesCell {
    enum class Kind : uint8_t { Empty, Missing, Value };
    Kind kind = Kind::Empty;
    double value = 0.0;
};

struct PointSeries {
    double p = 0.0;
    // Sized horizon+1 when computed, empty otherwise.
    std::vector<double> tvd;
    std::vector<double> tvd_timeavg;
    std::vector<double> sigma;
    std::vector<SeriesCell> negativity;
    std::vector<ProbabilityDistribution> dists;  // only with kObsDistribution
};

struct PointSummary {
    double p = 0.0;
    std::optional<double> final_tvd;
    SeriesCell final_negativity;
    bool mixing_requested = false;
    bool mixing_avg_requested = false;
    std::optional<int> mixing_time;      // nullopt = not mixed by the horizon
    std::optional<int> mixing_time_avg;  // likewise for the time-averaged series
};

struct SweepResult {
    ExperimentConfig cfg;
    int horizon = 0;  // effective horizon (== line steps for line runs)
    std::vector<PointSeries> series;
    std::vector<PointSummary> summary;
};

// Line sweep: for each p, evolve T steps and record the requested
// observables. The TVD reference is the fixed top-hat for a T-step walk;
// sigma is the per-step standard deviation; negativity follows neg_stride.
SweepResult run_line_experiment(const ExperimentConfig& cfg);

// Cycle sweep: for each p, evolve to the horizon and record the instantaneous
// TVD (odd N against uniform, even N against the parity-matched uniform), the
// running-time-average TVD against uniform, per-step negativity, and the
// mixing times of both series. The running average at index t covers steps
// 0..t inclusive (the prefix-exclusive convention would leave t=0 undefined;
// mixing times differ by at most one step between the two conventions).
SweepResult run_cycle_experiment(const ExperimentConfig& cfg);

// Dispatches on cfg.geometry.
SweepResult run_experiment(const ExperimentConfig& cfg);

// Writes <stem>_series.csv and <stem>_summary.csv (and <stem>_dist.csv when
// distributions were recorded). Deterministic byte output: fixed headers,
// 12-significant-digit floats, LF endings, `#` metadata lines (config echo,
// horizon, and on cycles the 1/N threshold) at the top. Partial files are
// removed when emission fails.
void emit_csv(const SweepResult& result, const std::string& stem);

// Canonical one-line echo of a config; used for the CSV metadata.
std::string config_echo(const ExperimentConfig& cfg);

// Name <-> value helpers shared by the CLI and the CSV metadata.
std::string to_string(DecoherenceTarget t);
std::string to_string(CoinInit c);
std::string observables_to_string(unsigned mask);
DecoherenceTarget target_from_string(const std::string& s);     // throws ConfigError
CoinInit coin_init_from_string(const std::string& s);           // throws ConfigError
unsigned observables_from_string(const std::string& csv_list);  // throws ConfigError

}  // namespace qwalk
