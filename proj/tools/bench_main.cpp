// Benchmark: structured OpenMP step kernels vs the serial dense reference,
// plus the Hermitian eigensolver. Also cross-checks that both step
// implementations agree on a warmed-up state, so a timing run doubles as a
// consistency check.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qwalk/dynamics.hpp"
#include "qwalk/eigensolver.hpp"
#include "qwalk/entanglement.hpp"
#include "qwalk/reference.hpp"
#include "qwalk/state_space.hpp"

namespace {

using qwalk::ComplexMatrix;
using qwalk::DecoherenceSpec;
using qwalk::DecoherenceTarget;
using qwalk::DensityOperator;
using qwalk::WalkGeometry;

template <class F>
double ms_per_call(int reps, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) worst = std::max(worst, std::abs(a.a[i] - b.a[i]));
    return worst;
}

DensityOperator warmed_state(const WalkGeometry& geom, const DecoherenceSpec& spec, int warm) {
    return qwalk::evolve(qwalk::make_initial_state(geom, qwalk::CoinInit::SymmetricPhase), spec,
                         warm);
}

void bench_step(const char* name, const WalkGeometry& geom, int structured_reps, int dense_reps) {
    const DecoherenceSpec spec{DecoherenceTarget::Both, 0.1};
    const DensityOperator rho0 = warmed_state(geom, spec, 10);
    const int max_threads = omp_get_max_threads();

    qwalk::Evolver evolver(geom, spec);
    double ms_one = 0.0;
    double ms_max = 0.0;
    {
        omp_set_num_threads(1);
        DensityOperator rho = rho0;
        ms_one = ms_per_call(structured_reps, [&] { evolver.step(rho); });
    }
    {
        omp_set_num_threads(max_threads);
        DensityOperator rho = rho0;
        ms_max = ms_per_call(structured_reps, [&] { evolver.step(rho); });
    }

    DensityOperator rho_dense = rho0;
    const double ms_dense = ms_per_call(dense_reps, [&] {
        rho_dense = qwalk::ref::decoherent_step_dense(rho_dense, spec);
    });

    DensityOperator structured_once = rho0;
    evolver.step(structured_once);
    const DensityOperator dense_once = qwalk::ref::decoherent_step_dense(rho0, spec);
    const double diff = max_abs_diff(structured_once.m, dense_once.m);

    std::printf("%-18s d=%4d  %10.4f  %10.4f  %12.3f  %9.1fx  %9.2e\n", name, geom.dim(), ms_one,
                ms_max, ms_dense, ms_dense / std::max(ms_max, 1e-9), diff);
}

void bench_eigensolver(const char* name, const WalkGeometry& geom, int warm, int reps) {
    const DecoherenceSpec spec{DecoherenceTarget::PositionOnly, 0.05};
    const DensityOperator rho = warmed_state(geom, spec, warm);
    const qwalk::PartialTransposed pt = qwalk::partial_transpose_coin(rho);
    double checksum = 0.0;
    const double ms = ms_per_call(reps, [&] {
        const auto evals = qwalk::hermitian_eigenvalues(pt.m);
        checksum += evals.front() + evals.back();
    });
    std::printf("%-18s d=%4d  %12.3f ms/solve   (checksum %.6f)\n", name, geom.dim(), ms,
                checksum);
}

}  // namespace

int main() {
    std::printf("step kernels: structured (OpenMP, O(d^2)) vs dense reference (serial, O(d^3))\n");
    std::printf("max OpenMP threads: %d\n\n", omp_get_max_threads());
    std::printf("%-18s %-6s  %10s  %10s  %12s  %10s  %9s\n", "case", "", "ms/1thr", "ms/max",
                "ms/dense", "speedup", "max|diff|");

    bench_step("cycle N=51", WalkGeometry::cycle(51), 200, 5);
    bench_step("line T=100", WalkGeometry::line(100), 64, 2);

    std::printf("\nHermitian eigensolver on partial-transposed states\n");
    bench_eigensolver("cycle N=51", WalkGeometry::cycle(51), 40, 5);
    bench_eigensolver("line T=100", WalkGeometry::line(100), 40, 1);
    return 0;
}
