#pragma once

#include <optional>
#include <vector>

#include "qwalk/state_space.hpp"

namespace qwalk {

enum class ReferenceKind { TopHat, UniformCycle, ParityUniformCycle };

struct ReferenceDistribution {
    ReferenceKind kind;
    WalkGeometry geom;
    std::vector<double> w;
};

// Standard deviation about the mean of a line distribution.
double std_dev(const ProbabilityDistribution& p);

// Total variational distance in the unhalved convention: sum_x |P(x) - Q(x)|,
// range [0, 2]. Mixing thresholds below are quoted against this convention.
double tvd(const ProbabilityDistribution& p, const ReferenceDistribution& q);

// Uniform reference over the spread interval of a T-step line walk: equal
// weight on { x : |x| <= W, x == T (mod 2) } where W is the largest integer
// <= T/sqrt(2) with T's parity. The rule would give W < 0 for T = 1, where it
// is clamped up to the smallest nonnegative integer of T's parity.
ReferenceDistribution top_hat_reference(const WalkGeometry& line_geom, int steps);

ReferenceDistribution uniform_cycle(const WalkGeometry& cycle_geom);

// Even cycles conserve position parity (the walker hops every step), so the
// instantaneous distribution can only approach the uniform distribution over
// sites of the current parity: weight 2/N on sites with x == parity (mod 2).
ReferenceDistribution parity_uniform_cycle(const WalkGeometry& cycle_geom, int parity);

// (1/T) sum of the inputs; they must share a domain. Throws on empty input.
ProbabilityDistribution time_averaged(const std::vector<ProbabilityDistribution>& dists);

struct MixingRecord {
    std::vector<double> tvd_series;  // indexed by t = 0..horizon
    double epsilon = 0.0;
};

// Smallest T such that tvd_series(t) < epsilon for every t in (T, horizon];
// nullopt ("not mixed") when the series still sits at or above epsilon at the
// horizon. Serves both the instantaneous and the time-averaged series.
std::optional<int> mixing_time(const MixingRecord& record);

}  // namespace qwalk
