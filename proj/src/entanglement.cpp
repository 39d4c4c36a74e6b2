#include "qwalk/entanglement.hpp"

#include <cmath>
#include <stdexcept>

#include "qwalk/eigensolver.hpp"

namespace qwalk {

ComplexMatrix coin_block_transpose(const ComplexMatrix& m) {
    if (m.n % 2 != 0) throw std::invalid_argument("coin transpose needs an even dimension");
    const int pairs = m.n / 2;
    ComplexMatrix out(m.n);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < pairs; ++x) {
        for (int y = 0; y < pairs; ++y) {
            // Transpose the 2x2 tile at block (x, y): swap its off-diagonal
            // corners, keep the diagonal corners. Pure element moves.
            out(2 * x, 2 * y) = m(2 * x, 2 * y);
            out(2 * x, 2 * y + 1) = m(2 * x + 1, 2 * y);
            out(2 * x + 1, 2 * y) = m(2 * x, 2 * y + 1);
            out(2 * x + 1, 2 * y + 1) = m(2 * x + 1, 2 * y + 1);
        }
    }
    return out;
}

PartialTransposed partial_transpose_coin(const DensityOperator& rho) {
    return {rho.geom, coin_block_transpose(rho.m)};
}

std::optional<NegativityValue> negativity(const DensityOperator& rho, int max_sweeps) {
    const PartialTransposed pt = partial_transpose_coin(rho);
    std::vector<double> lambda;
    try {
        lambda = hermitian_eigenvalues(pt.m, max_sweeps);
    } catch (const ConvergenceFailure&) {
        return std::nullopt;  // caller records a gap and moves on
    }
    // Sum of negative eigenvalues below the noise floor; by the unit-trace
    // identity this equals (sum |lambda| - 1)/2 up to eigensolve error.
    double neg_sum = 0.0, total = 0.0;
    for (double v : lambda) {
        total += v;
        if (v < -1e-12) neg_sum -= v;
    }
    return NegativityValue{neg_sum, std::abs(total - 1.0)};
}

}  // namespace qwalk
