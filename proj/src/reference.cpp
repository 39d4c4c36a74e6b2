#include "qwalk/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk::ref {

ComplexMatrix coin_matrix(const WalkGeometry& geom) {
    const int d = geom.dim();
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix c(d);
    for (int x = 0; x < geom.position_count; ++x) {
        // Columns are the images of |x,-1> and |x,+1>.
        c(flat_index(x, 0), flat_index(x, 0)) = -s;
        c(flat_index(x, 1), flat_index(x, 0)) = s;
        c(flat_index(x, 0), flat_index(x, 1)) = s;
        c(flat_index(x, 1), flat_index(x, 1)) = s;
    }
    return c;
}

ComplexMatrix shift_matrix(const WalkGeometry& geom) {
    const int d = geom.dim();
    ComplexMatrix s(d);
    for (int x = 0; x < geom.position_count; ++x) {
        for (int slot = 0; slot < kCoinSlots; ++slot) {
            const int dir = slot == 0 ? -1 : +1;
            int dest = x + dir;
            if (geom.kind == GeometryKind::Cycle) {
                if (dest < 0) dest += geom.extent;
                if (dest >= geom.extent) dest -= geom.extent;
            } else if (dest < 0 || dest >= geom.position_count) {
                // A line walk sized to its step budget never feeds this entry;
                // drop it so the matrix stays well-formed on the window.
                continue;
            }
            s(flat_index(dest, slot), flat_index(x, slot)) = 1.0;
        }
    }
    return s;
}

ComplexMatrix step_matrix(const WalkGeometry& geom) {
    return matmul(shift_matrix(geom), coin_matrix(geom));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.n != b.n) throw std::invalid_argument("dimension mismatch");
    const int n = a.n;
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.n);
    for (int i = 0; i < a.n; ++i) {
        for (int j = 0; j < a.n; ++j) out(i, j) = std::conj(a(j, i));
    }
    return out;
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& rho) {
    return matmul(matmul(u, rho), adjoint(u));
}

std::vector<ComplexMatrix> projector_family(const WalkGeometry& geom, DecoherenceTarget target) {
    const int d = geom.dim();
    std::vector<ComplexMatrix> family;
    switch (target) {
        case DecoherenceTarget::None:
            break;
        case DecoherenceTarget::CoinOnly:
            for (int slot = 0; slot < kCoinSlots; ++slot) {
                ComplexMatrix p(d);
                for (int x = 0; x < geom.position_count; ++x) {
                    p(flat_index(x, slot), flat_index(x, slot)) = 1.0;
                }
                family.push_back(std::move(p));
            }
            break;
        case DecoherenceTarget::PositionOnly:
            for (int x = 0; x < geom.position_count; ++x) {
                ComplexMatrix p(d);
                for (int slot = 0; slot < kCoinSlots; ++slot) {
                    p(flat_index(x, slot), flat_index(x, slot)) = 1.0;
                }
                family.push_back(std::move(p));
            }
            break;
        case DecoherenceTarget::Both:
            for (int f = 0; f < d; ++f) {
                ComplexMatrix p(d);
                p(f, f) = 1.0;
                family.push_back(std::move(p));
            }
            break;
    }
    return family;
}

DensityOperator decoherent_step_dense(const DensityOperator& rho, const DecoherenceSpec& spec) {
    validate(spec);
    const ComplexMatrix u = step_matrix(rho.geom);
    const ComplexMatrix stepped = conjugate_by(u, rho.m);

    const double p = spec.effective_rate();
    DensityOperator out{rho.geom, ComplexMatrix(rho.m.n)};
    if (p == 0.0) {
        out.m = stepped;
        return out;
    }
    for (size_t i = 0; i < stepped.a.size(); ++i) out.m.a[i] = (1.0 - p) * stepped.a[i];
    for (const ComplexMatrix& proj : projector_family(rho.geom, spec.target)) {
        const ComplexMatrix term = conjugate_by(proj, stepped);
        for (size_t i = 0; i < term.a.size(); ++i) out.m.a[i] += p * term.a[i];
    }
    return out;
}

}  // namespace qwalk::ref
