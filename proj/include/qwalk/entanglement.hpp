#pragma once

#include <optional>

#include "qwalk/state_space.hpp"

namespace qwalk {

// Transposes every 2x2 coin block of a matrix over the joint basis:
// out[(x,c),(y,b)] = in[(x,b),(y,c)]. Applying it twice restores the input
// bit-exactly (pure entry swaps, no arithmetic).
ComplexMatrix coin_block_transpose(const ComplexMatrix& m);

struct PartialTransposed {
    WalkGeometry geom;
    ComplexMatrix m;
};

// Partial transpose of the state over the coin subsystem. Hermiticity and
// unit trace carry over; negative eigenvalues certify coin-position
// entanglement.
PartialTransposed partial_transpose_coin(const DensityOperator& rho);

struct NegativityValue {
    double value;                // sum of |negative eigenvalues| of the partial transpose
    double eigenvalue_residual;  // |sum(eigenvalues) - 1|, eigensolve quality metric
};

// Negativity E = (1/2)(sum_i |lambda'_i| - 1) of the coin partial transpose,
// evaluated as the sum of negative eigenvalues below the -1e-12 noise floor
// (the two forms agree through the unit-trace identity). Returns nullopt when
// the eigensolver fails to converge; callers record a missing data point and
// continue. A qubit coin bounds the value by 1/2.
std::optional<NegativityValue> negativity(const DensityOperator& rho, int max_sweeps = 64);

}  // namespace qwalk
