#pragma once

#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/state_space.hpp"

// Serial dense reference implementation of the dynamics. Everything here
// materializes full operators and multiplies them out naively, with no OpenMP
// and no structural shortcuts; it exists so the production kernels can be
// tested against an independent evaluation of the same algebra, and as the
// baseline for the benchmark. O(d^3) and worse per step by design.
namespace qwalk::ref {

ComplexMatrix coin_matrix(const WalkGeometry& geom);   // block-diagonal coin toss
ComplexMatrix shift_matrix(const WalkGeometry& geom);  // conditional shift permutation
ComplexMatrix step_matrix(const WalkGeometry& geom);   // S * C

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& rho);  // U rho U^+

// The dephasing channel's projector family, as explicit dense matrices:
// CoinOnly -> one projector per coin state (identity on position);
// PositionOnly -> one per position (identity on the coin);
// Both -> one per joint basis state; None -> empty.
std::vector<ComplexMatrix> projector_family(const WalkGeometry& geom, DecoherenceTarget target);

// Literal decoherent step: (1-p) U rho U^+ + p sum_j P_j U rho U^+ P_j^+
// with U = S C and the projectors materialized.
DensityOperator decoherent_step_dense(const DensityOperator& rho, const DecoherenceSpec& spec);

}  // namespace qwalk::ref
