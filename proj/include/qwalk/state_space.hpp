#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

enum class GeometryKind { Line, Cycle };

// Position set of the walk. A line walk of T steps lives on the fixed window
// x in [-T, T]; since |x| <= t <= T for a walker started at the origin, the
// window edge is never reached and no boundary rule is needed. A cycle has N
// sites with wrap-around on shift.
struct WalkGeometry {
    GeometryKind kind = GeometryKind::Line;
    int extent = 0;          // Line: step budget T; Cycle: number of sites N
    int position_count = 0;  // Line: 2T+1; Cycle: N

    static WalkGeometry line(int steps) {
        if (steps < 1) throw std::invalid_argument("line geometry needs steps >= 1");
        return {GeometryKind::Line, steps, 2 * steps + 1};
    }
    static WalkGeometry cycle(int sites) {
        if (sites < 2) throw std::invalid_argument("cycle geometry needs at least 2 sites");
        return {GeometryKind::Cycle, sites, sites};
    }

    int dim() const { return 2 * position_count; }

    // Position label <-> dense position index.
    int index_of(int x) const {
        if (kind == GeometryKind::Line) return x + extent;
        int r = x % extent;
        return r < 0 ? r + extent : r;
    }
    int label_of(int index) const {
        return kind == GeometryKind::Line ? index - extent : index;
    }

    bool operator==(const WalkGeometry& o) const {
        return kind == o.kind && extent == o.extent;
    }
};

// Coin labels {-1,+1} live in array slots {0,1}; the coin is the inner
// (fastest-varying) axis of the flat index, so the coin block of a fixed
// position pair is a contiguous 2x2 tile and the partial transpose over the
// coin is plain stride arithmetic.
inline constexpr int kCoinSlots = 2;
inline int flat_index(int position_index, int coin_slot) { return 2 * position_index + coin_slot; }
inline int position_of(int flat) { return flat >> 1; }
inline int slot_of(int flat) { return flat & 1; }
inline int coin_label_of_slot(int slot) { return slot == 0 ? -1 : +1; }
inline int slot_of_coin_label(int c) {
    if (c != -1 && c != +1) throw std::invalid_argument("coin label must be -1 or +1");
    return c == -1 ? 0 : 1;
}

// Dense row-major complex matrix; the only matrix container used anywhere.
struct ComplexMatrix {
    int n = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

double trace_real(const ComplexMatrix& m);
double hermiticity_deviation(const ComplexMatrix& m);  // max |m_ij - conj(m_ji)|
double purity(const ComplexMatrix& m);                 // Re Tr m^2

struct PureState {
    WalkGeometry geom;
    std::vector<cplx> amp;  // length geom.dim(), flat-indexed
};

struct DensityOperator {
    WalkGeometry geom;
    ComplexMatrix m;  // geom.dim() x geom.dim()
};

enum class CoinInit { SymmetricPhase, SymmetricAngle, BasisMinus, BasisPlus };

// Coin amplitudes (slot 0 = coin -1, slot 1 = coin +1) for each start.
std::pair<cplx, cplx> coin_amplitudes(CoinInit init);

// Walker at the origin (line x=0, cycle site 0) with the given coin state.
PureState make_initial_pure(const WalkGeometry& geom, CoinInit init);
DensityOperator make_initial_state(const WalkGeometry& geom, CoinInit init);

struct ProbabilityDistribution {
    WalkGeometry geom;
    std::vector<double> w;  // indexed by position index, sums to 1
};

// P(x) = sum_c rho[(x,c),(x,c)]; tiny negative diagonal noise is clamped to 0.
ProbabilityDistribution position_marginal(const DensityOperator& rho);

}  // namespace qwalk
