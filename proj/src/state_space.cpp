#include "qwalk/state_space.hpp"

#include <cmath>

namespace qwalk {

double trace_real(const ComplexMatrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.n; ++i) t += m(i, i).real();
    return t;
}

double hermiticity_deviation(const ComplexMatrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i) {
        for (int j = i; j < m.n; ++j) {
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return worst;
}

double purity(const ComplexMatrix& m) {
    // Re Tr m^2 = sum_ij Re(m_ij m_ji); for Hermitian m this is sum |m_ij|^2.
    double t = 0.0;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            t += (m(i, j) * m(j, i)).real();
        }
    }
    return t;
}

std::pair<cplx, cplx> coin_amplitudes(CoinInit init) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (init) {
        case CoinInit::SymmetricPhase:
            return {cplx(inv_sqrt2, 0.0), cplx(0.0, inv_sqrt2)};
        case CoinInit::SymmetricAngle:
            return {cplx(std::cos(M_PI / 8.0), 0.0), cplx(std::sin(M_PI / 8.0), 0.0)};
        case CoinInit::BasisMinus:
            return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
        case CoinInit::BasisPlus:
            return {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    }
    throw std::logic_error("unreachable coin init");
}

PureState make_initial_pure(const WalkGeometry& geom, CoinInit init) {
    if (geom.position_count < 2) {
        throw std::invalid_argument("geometry must have at least 2 positions");
    }
    PureState psi{geom, std::vector<cplx>(static_cast<size_t>(geom.dim()))};
    const int origin = geom.index_of(0);
    auto [a0, a1] = coin_amplitudes(init);
    psi.amp[flat_index(origin, 0)] = a0;
    psi.amp[flat_index(origin, 1)] = a1;
    return psi;
}

DensityOperator make_initial_state(const WalkGeometry& geom, CoinInit init) {
    PureState psi = make_initial_pure(geom, init);
    const int d = geom.dim();
    DensityOperator rho{geom, ComplexMatrix(d)};
    const int origin = geom.index_of(0);
    // The state is |0><0| tensor |chi><chi|: only the origin's 2x2 coin block
    // is nonzero, so fill just that block instead of the full outer product.
    for (int c = 0; c < kCoinSlots; ++c) {
        for (int b = 0; b < kCoinSlots; ++b) {
            const int i = flat_index(origin, c);
            const int j = flat_index(origin, b);
            rho.m(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
        }
    }
    return rho;
}

ProbabilityDistribution position_marginal(const DensityOperator& rho) {
    const int p_count = rho.geom.position_count;
    ProbabilityDistribution dist{rho.geom, std::vector<double>(static_cast<size_t>(p_count))};
    for (int x = 0; x < p_count; ++x) {
        double w = rho.m(flat_index(x, 0), flat_index(x, 0)).real() +
                   rho.m(flat_index(x, 1), flat_index(x, 1)).real();
        dist.w[x] = w < 0.0 ? 0.0 : w;
    }
    return dist;
}

}  // namespace qwalk
