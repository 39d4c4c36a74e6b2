#include "qwalk/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

double std_dev(const ProbabilityDistribution& p) {
    if (p.geom.kind != GeometryKind::Line) {
        throw std::invalid_argument("standard deviation is defined on line distributions");
    }
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < p.geom.position_count; ++i) {
        const double x = static_cast<double>(p.geom.label_of(i));
        mean += x * p.w[i];
        second += x * x * p.w[i];
    }
    const double var = second - mean * mean;
    return std::sqrt(var > 0.0 ? var : 0.0);
}

double tvd(const ProbabilityDistribution& p, const ReferenceDistribution& q) {
    if (!(p.geom == q.geom)) throw std::invalid_argument("TVD needs a common domain");
    double sum = 0.0;
    for (size_t i = 0; i < p.w.size(); ++i) sum += std::abs(p.w[i] - q.w[i]);
    return sum;
}

ReferenceDistribution top_hat_reference(const WalkGeometry& line_geom, int steps) {
    if (line_geom.kind != GeometryKind::Line) {
        throw std::invalid_argument("top-hat reference lives on a line window");
    }
    if (steps < 0 || steps > line_geom.extent) {
        throw std::invalid_argument("top-hat width exceeds the line window");
    }
    // Largest integer <= steps/sqrt(2) sharing the parity of steps; the walk
    // only populates positions of that parity. For steps=1 the rule lands at
    // -1, clamped up to the smallest nonnegative integer of the right parity.
    int w = static_cast<int>(std::floor(steps / std::sqrt(2.0)));
    if ((w & 1) != (steps & 1)) w -= 1;
    if (w < 0) w = steps & 1;

    ReferenceDistribution ref{ReferenceKind::TopHat, line_geom,
                              std::vector<double>(static_cast<size_t>(line_geom.position_count))};
    const int support = w + 1;  // positions -w, -w+2, ..., w
    const double weight = 1.0 / support;
    for (int x = -w; x <= w; x += 2) ref.w[line_geom.index_of(x)] = weight;
    return ref;
}

ReferenceDistribution uniform_cycle(const WalkGeometry& cycle_geom) {
    if (cycle_geom.kind != GeometryKind::Cycle) {
        throw std::invalid_argument("uniform reference needs a cycle geometry");
    }
    const int n = cycle_geom.position_count;
    return {ReferenceKind::UniformCycle, cycle_geom,
            std::vector<double>(static_cast<size_t>(n), 1.0 / n)};
}

ReferenceDistribution parity_uniform_cycle(const WalkGeometry& cycle_geom, int parity) {
    if (cycle_geom.kind != GeometryKind::Cycle) {
        throw std::invalid_argument("parity-uniform reference needs a cycle geometry");
    }
    const int n = cycle_geom.position_count;
    if (n % 2 != 0) throw std::invalid_argument("parity-uniform reference needs an even cycle");
    if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    ReferenceDistribution ref{ReferenceKind::ParityUniformCycle, cycle_geom,
                              std::vector<double>(static_cast<size_t>(n), 0.0)};
    const double weight = 2.0 / n;
    for (int x = parity; x < n; x += 2) ref.w[x] = weight;
    return ref;
}

ProbabilityDistribution time_averaged(const std::vector<ProbabilityDistribution>& dists) {
    if (dists.empty()) throw std::invalid_argument("time average of an empty sequence");
    ProbabilityDistribution avg{dists.front().geom,
                                std::vector<double>(dists.front().w.size(), 0.0)};
    for (const auto& d : dists) {
        if (!(d.geom == avg.geom)) throw std::invalid_argument("time average needs one domain");
        for (size_t i = 0; i < avg.w.size(); ++i) avg.w[i] += d.w[i];
    }
    const double inv = 1.0 / static_cast<double>(dists.size());
    for (double& w : avg.w) w *= inv;
    return avg;
}

std::optional<int> mixing_time(const MixingRecord& record) {
    if (!(record.epsilon > 0.0)) throw std::invalid_argument("mixing threshold must be positive");
    if (record.tvd_series.empty()) throw std::invalid_argument("mixing record is empty");
    const int horizon = static_cast<int>(record.tvd_series.size()) - 1;
    int last_bad = -1;
    for (int t = horizon; t >= 0; --t) {
        if (record.tvd_series[static_cast<size_t>(t)] >= record.epsilon) {
            last_bad = t;
            break;
        }
    }
    if (last_bad == horizon) return std::nullopt;  // still unmixed at the horizon
    return last_bad < 0 ? 0 : last_bad;
}

}  // namespace qwalk
