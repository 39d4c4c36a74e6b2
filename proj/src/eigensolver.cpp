#include "qwalk/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace qwalk {

NonHermitianInput::NonHermitianInput(double dev)
    : std::invalid_argument("matrix deviates from Hermitian by " + std::to_string(dev)),
      deviation(dev) {}

ConvergenceFailure::ConvergenceFailure(int sweeps)
    : std::runtime_error("QL iteration exceeded " + std::to_string(sweeps) +
                         " sweeps for one eigenvalue"),
      max_sweeps(sweeps) {}

namespace {

// Householder reduction of a Hermitian matrix to tridiagonal form, keeping
// eigenvalues only. d receives the (real) diagonal; e[k] the magnitude of the
// coupling between d[k] and d[k+1] — the subdiagonal picks up a complex phase,
// but a diagonal unitary similarity rotates every phase away without touching
// the diagonal, so the real symmetric tridiagonal (d, |e|) is isospectral.
void tridiagonalize(std::vector<cplx>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    std::vector<cplx> w(static_cast<size_t>(n)), p(static_cast<size_t>(n)),
        q(static_cast<size_t>(n));
    auto at = [&a, n](int i, int j) -> cplx& { return a[static_cast<size_t>(i) * n + j]; };

    for (int k = 0; k + 2 < n; ++k) {
        const int m = n - k - 1;  // length of the column below the diagonal
        // L1 scale guard against under/overflow in the norm.
        double scale = 0.0;
        for (int i = 0; i < m; ++i) {
            const cplx v = at(k + 1 + i, k);
            scale += std::abs(v.real()) + std::abs(v.imag());
        }
        if (scale == 0.0) {
            e[k] = 0.0;
            continue;
        }
        double norm2 = 0.0;
        for (int i = 0; i < m; ++i) {
            w[i] = at(k + 1 + i, k) / scale;
            norm2 += std::norm(w[i]);
        }
        const double norm = std::sqrt(norm2);
        e[k] = scale * norm;
        if (m == 1) continue;  // nothing below the subdiagonal to eliminate

        // Reflector w = x + phase(x0)*|x| e1 (no cancellation in w[0]).
        const cplx phase = w[0] == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : w[0] / std::abs(w[0]);
        w[0] += phase * norm;
        double wnorm2 = 0.0;
        for (int i = 0; i < m; ++i) wnorm2 += std::norm(w[i]);
        const double beta = 2.0 / wnorm2;

        // p = beta * A2 w over the trailing block (rows independent).
#pragma omp parallel for schedule(static) if (m > 96)
        for (int i = 0; i < m; ++i) {
            cplx acc(0.0, 0.0);
            const cplx* row = &a[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j) acc += row[j] * w[j];
            p[i] = beta * acc;
        }
        cplx wp(0.0, 0.0);
        for (int i = 0; i < m; ++i) wp += std::conj(w[i]) * p[i];
        const cplx kappa = 0.5 * beta * wp;
        for (int i = 0; i < m; ++i) q[i] = p[i] - kappa * w[i];

        // Rank-2 Hermitian update A2 <- A2 - q w^+ - w q^+.
#pragma omp parallel for schedule(static) if (m > 96)
        for (int i = 0; i < m; ++i) {
            cplx* row = &a[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            const cplx qi = q[i], wi = w[i];
            for (int j = 0; j < m; ++j) {
                row[j] -= qi * std::conj(w[j]) + wi * std::conj(q[j]);
            }
        }
    }
    if (n >= 2) e[n - 2] = std::abs(at(n - 1, n - 2));
    e[n - 1] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = at(i, i).real();
}

// Implicit-shift QL iteration on the real symmetric tridiagonal (d, e);
// e[i] couples d[i] and d[i+1]. Eigenvalues land in d, unordered.
//
// Deflation combines the relative test with an absolute floor at
// eps * ||A||: by Weyl's inequality, dropping a coupling that small perturbs
// no eigenvalue by more than eps * ||A||. Without the floor, noise-level
// couplings between noise-level diagonal entries (ubiquitous in partial
// transposes of near-pure states, whose spectra cluster at ~1e-18) evade the
// relative test and can burn hundreds of sweeps resolving pure noise.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n, int max_sweeps) {
    double anorm = 0.0;
    for (int i = 0; i < n; ++i) {
        anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]) +
                                    (i > 0 ? std::abs(e[i - 1]) : 0.0));
    }
    const double floor_abs = DBL_EPSILON * anorm;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= DBL_EPSILON * dd + floor_abs) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps) throw ConvergenceFailure(max_sweeps);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {  // split: negligible rotation, restart scan
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, int max_sweeps) {
    const int n = m.n;
    if (n == 0) return {};
    const double dev = hermiticity_deviation(m);
    if (!(dev <= 1e-8)) throw NonHermitianInput(dev);

    // Work on the exactly Hermitian average of the two triangles.
    std::vector<cplx> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a[static_cast<size_t>(i) * n + j] = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }

    std::vector<double> d(static_cast<size_t>(n)), e(static_cast<size_t>(n), 0.0);
    if (n == 1) {
        d[0] = a[0].real();
    } else {
        tridiagonalize(a, n, d, e);
        ql_implicit(d, e, n, max_sweeps);
    }
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace qwalk
