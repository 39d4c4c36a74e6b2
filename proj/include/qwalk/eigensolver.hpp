#pragma once

#include <stdexcept>
#include <vector>

#include "qwalk/state_space.hpp"

namespace qwalk {

struct NonHermitianInput : std::invalid_argument {
    double deviation;
    explicit NonHermitianInput(double dev);
};

struct ConvergenceFailure : std::runtime_error {
    int max_sweeps;
    explicit ConvergenceFailure(int sweeps);
};

// All eigenvalues of a Hermitian matrix, ascending. The matrix is reduced to
// real symmetric tridiagonal form by complex Householder reflections (the
// off-diagonal phases are absorbed by a diagonal unitary similarity), then
// diagonalized by implicit-shift QL iteration. Inputs further than 1e-8 from
// Hermitian are rejected; QL failure to deflate an eigenvalue within
// max_sweeps sweeps raises ConvergenceFailure instead of returning garbage.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, int max_sweeps = 64);

}  // namespace qwalk
