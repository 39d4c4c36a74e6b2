#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

std::vector<double> binomial_line_distribution(int window_steps, int steps) {
    if (steps > window_steps) throw std::invalid_argument("walk would leave the window");
    const int count = 2 * window_steps + 1;
    std::vector<double> w(static_cast<size_t>(count), 0.0);
    w[static_cast<size_t>(window_steps)] = 1.0;  // origin
    std::vector<double> next(w.size());
    for (int t = 0; t < steps; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < count; ++i) {
            const double half = 0.5 * w[static_cast<size_t>(i)];
            if (half == 0.0) continue;
            if (i > 0) next[static_cast<size_t>(i - 1)] += half;
            if (i + 1 < count) next[static_cast<size_t>(i + 1)] += half;
        }
        w.swap(next);
    }
    return w;
}

std::vector<double> classical_cycle_distribution(int sites, int steps) {
    std::vector<double> w(static_cast<size_t>(sites), 0.0);
    w[0] = 1.0;
    std::vector<double> next(w.size());
    for (int t = 0; t < steps; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < sites; ++i) {
            const double half = 0.5 * w[static_cast<size_t>(i)];
            if (half == 0.0) continue;
            next[static_cast<size_t>((i + 1) % sites)] += half;
            next[static_cast<size_t>((i + sites - 1) % sites)] += half;
        }
        w.swap(next);
    }
    return w;
}

std::vector<double> classical_cycle_tvd_series(int sites, int horizon) {
    const bool even = sites % 2 == 0;
    std::vector<double> w(static_cast<size_t>(sites), 0.0);
    w[0] = 1.0;
    std::vector<double> next(w.size());
    std::vector<double> series;
    series.reserve(static_cast<size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        if (t > 0) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int i = 0; i < sites; ++i) {
                const double half = 0.5 * w[static_cast<size_t>(i)];
                if (half == 0.0) continue;
                next[static_cast<size_t>((i + 1) % sites)] += half;
                next[static_cast<size_t>((i + sites - 1) % sites)] += half;
            }
            w.swap(next);
        }
        double sum = 0.0;
        for (int x = 0; x < sites; ++x) {
            double ref = 1.0 / sites;
            if (even) ref = (x % 2 == t % 2) ? 2.0 / sites : 0.0;
            sum += std::abs(w[static_cast<size_t>(x)] - ref);
        }
        series.push_back(sum);
    }
    return series;
}

int last_index_at_or_above(const std::vector<double>& series, double eps) {
    for (int t = static_cast<int>(series.size()) - 1; t >= 0; --t) {
        if (series[static_cast<size_t>(t)] >= eps) return t;
    }
    return -1;
}

namespace {

// Cyclic Jacobi on a dense real symmetric matrix; returns the diagonal after
// the off-diagonal mass has been annihilated.
std::vector<double> jacobi_symmetric(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) off += at(i, j) * at(i, j);
                else scale += std::abs(at(i, j));
            }
        }
        if (off <= 1e-28 * (scale * scale + 1.0)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> evals(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) evals[static_cast<size_t>(i)] = at(i, i);
    std::sort(evals.begin(), evals.end());
    return evals;
}

}  // namespace

std::vector<double> jacobi_hermitian_eigenvalues(const qwalk::ComplexMatrix& h) {
    const int n = h.n;
    const int m = 2 * n;
    std::vector<double> embed(static_cast<size_t>(m) * m, 0.0);
    auto put = [&](int i, int j, double v) { embed[static_cast<size_t>(i) * m + j] = v; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double b = h(i, j).real();
            const double c = h(i, j).imag();
            put(i, j, b);
            put(i + n, j + n, b);
            put(i, j + n, -c);
            put(i + n, j, c);
        }
    }
    const std::vector<double> doubled = jacobi_symmetric(std::move(embed), m);
    std::vector<double> evals(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        evals[static_cast<size_t>(k)] =
            0.5 * (doubled[static_cast<size_t>(2 * k)] + doubled[static_cast<size_t>(2 * k + 1)]);
    }
    return evals;
}

std::pair<double, double> eig2_closed_form(double a, qwalk::cplx b, double c) {
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), std::abs(b));
    return {mean - radius, mean + radius};
}

qwalk::ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    qwalk::ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = qwalk::cplx(u(rng), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const qwalk::cplx v(u(rng), u(rng));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

qwalk::ComplexMatrix random_density(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    qwalk::ComplexMatrix gmat(n);
    for (auto& v : gmat.a) v = qwalk::cplx(g(rng), g(rng));
    qwalk::ComplexMatrix rho(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            qwalk::cplx sum = 0.0;
            for (int k = 0; k < n; ++k) sum += gmat(i, k) * std::conj(gmat(j, k));
            rho(i, j) = sum;
        }
    }
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += rho(i, i).real();
    for (auto& v : rho.a) v /= trace;
    return rho;
}

}  // namespace oracle
