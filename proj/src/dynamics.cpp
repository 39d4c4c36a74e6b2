#include "qwalk/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qwalk {
namespace {

// Step direction for a coin slot: slot 0 carries coin -1, slot 1 carries +1.
inline int step_dir(int slot) { return slot == 0 ? -1 : +1; }

// Source position index feeding (pos, slot) after the shift, or -1 when the
// source lies outside a line window (those amplitudes are identically zero).
inline int shift_source(const WalkGeometry& g, int pos, int slot) {
    int src = pos - step_dir(slot);
    if (g.kind == GeometryKind::Cycle) {
        if (src < 0) src += g.extent;
        if (src >= g.extent) src -= g.extent;
        return src;
    }
    return (src < 0 || src >= g.position_count) ? -1 : src;
}

// Adjoint-shift source: where the amplitude at (pos, slot) moves from under S^+.
inline int unshift_source(const WalkGeometry& g, int pos, int slot) {
    int src = pos + step_dir(slot);
    if (g.kind == GeometryKind::Cycle) {
        if (src < 0) src += g.extent;
        if (src >= g.extent) src -= g.extent;
        return src;
    }
    return (src < 0 || src >= g.position_count) ? -1 : src;
}

// out = C in C^+ on a density matrix: a 2x2 sandwich of every coin block.
// With s = 1/sqrt2 the coin matrix in slot basis is s*[[-1, 1], [1, 1]]
// (columns are the images of |-1> and |+1>); it is real and symmetric, so the
// sandwich is out = M in M with M := that matrix, expanded entrywise below.
void coin_conjugate(const WalkGeometry& g, const cplx* in, cplx* out) {
    const int p_count = g.position_count;
    const int d = 2 * p_count;
#pragma omp parallel for schedule(static)
    for (int x = 0; x < p_count; ++x) {
        const cplx* r0 = in + static_cast<size_t>(2 * x) * d;
        const cplx* r1 = r0 + d;
        cplx* o0 = out + static_cast<size_t>(2 * x) * d;
        cplx* o1 = o0 + d;
        for (int y = 0; y < p_count; ++y) {
            const int j = 2 * y;
            const cplx b00 = r0[j], b01 = r0[j + 1];
            const cplx b10 = r1[j], b11 = r1[j + 1];
            // rows of M*B (s factored out): t = -row0 + row1, u = row0 + row1
            const cplx t0 = b10 - b00, t1 = b11 - b01;
            const cplx u0 = b00 + b10, u1 = b01 + b11;
            // columns of (M*B)*M, including both s factors (s^2 = 1/2)
            o0[j] = 0.5 * (t1 - t0);
            o0[j + 1] = 0.5 * (t0 + t1);
            o1[j] = 0.5 * (u1 - u0);
            o1[j + 1] = 0.5 * (u0 + u1);
        }
    }
}

// out = S in S^+ : pure gather, out[(y,b),(z,a)] = in[(y-b,b),(z-a,a)].
void shift_conjugate(const WalkGeometry& g, const cplx* in, cplx* out) {
    const int p_count = g.position_count;
    const int d = 2 * p_count;
#pragma omp parallel for schedule(static)
    for (int f = 0; f < d; ++f) {
        cplx* orow = out + static_cast<size_t>(f) * d;
        const int src_pos = shift_source(g, position_of(f), slot_of(f));
        if (src_pos < 0) {
            for (int j = 0; j < d; ++j) orow[j] = cplx(0.0, 0.0);
            continue;
        }
        const cplx* irow = in + static_cast<size_t>(flat_index(src_pos, slot_of(f))) * d;
        for (int z = 0; z < p_count; ++z) {
            for (int a = 0; a < kCoinSlots; ++a) {
                const int src_col = shift_source(g, z, a);
                orow[flat_index(z, a)] =
                    src_col < 0 ? cplx(0.0, 0.0) : irow[flat_index(src_col, a)];
            }
        }
    }
}

// out = S^+ in S : the inverse gather of shift_conjugate.
void unshift_conjugate(const WalkGeometry& g, const cplx* in, cplx* out) {
    const int p_count = g.position_count;
    const int d = 2 * p_count;
#pragma omp parallel for schedule(static)
    for (int f = 0; f < d; ++f) {
        cplx* orow = out + static_cast<size_t>(f) * d;
        const int src_pos = unshift_source(g, position_of(f), slot_of(f));
        if (src_pos < 0) {
            for (int j = 0; j < d; ++j) orow[j] = cplx(0.0, 0.0);
            continue;
        }
        const cplx* irow = in + static_cast<size_t>(flat_index(src_pos, slot_of(f))) * d;
        for (int z = 0; z < p_count; ++z) {
            for (int a = 0; a < kCoinSlots; ++a) {
                const int src_col = unshift_source(g, z, a);
                orow[flat_index(z, a)] =
                    src_col < 0 ? cplx(0.0, 0.0) : irow[flat_index(src_col, a)];
            }
        }
    }
}

// In-place blend: entries outside the channel's kept set shrink by (1-p);
// kept entries are never touched, so no rounding enters the retained part.
void dephase_blend(const WalkGeometry& g, DecoherenceTarget target, double p, cplx* m) {
    if (target == DecoherenceTarget::None || p == 0.0) return;
    const int d = 2 * g.position_count;
    const double keep = 1.0 - p;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < d; ++i) {
        cplx* row = m + static_cast<size_t>(i) * d;
        switch (target) {
            case DecoherenceTarget::CoinOnly: {
                const int si = slot_of(i);
                for (int j = 0; j < d; ++j) {
                    if (slot_of(j) != si) row[j] *= keep;
                }
                break;
            }
            case DecoherenceTarget::PositionOnly: {
                const int xi = position_of(i);
                for (int j = 0; j < d; ++j) {
                    if (position_of(j) != xi) row[j] *= keep;
                }
                break;
            }
            case DecoherenceTarget::Both: {
                for (int j = 0; j < d; ++j) {
                    if (j != i) row[j] *= keep;
                }
                break;
            }
            case DecoherenceTarget::None:
                break;
        }
    }
}

void check_steps_fit(const WalkGeometry& g, int steps) {
    if (steps < 0) throw std::invalid_argument("step count must be nonnegative");
    if (g.kind == GeometryKind::Line && steps > g.extent) {
        throw std::invalid_argument("a line window sized for " + std::to_string(g.extent) +
                                    " steps cannot host " + std::to_string(steps));
    }
}

}  // namespace

void validate(const DecoherenceSpec& spec) {
    if (!(spec.rate >= 0.0 && spec.rate <= 1.0)) {
        throw std::invalid_argument("decoherence rate must lie in [0,1]");
    }
}

void apply_coin(PureState& psi) {
    const double s = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < psi.geom.position_count; ++x) {
        const cplx a0 = psi.amp[flat_index(x, 0)];
        const cplx a1 = psi.amp[flat_index(x, 1)];
        psi.amp[flat_index(x, 0)] = s * (a1 - a0);
        psi.amp[flat_index(x, 1)] = s * (a0 + a1);
    }
}

void apply_shift(PureState& psi) {
    std::vector<cplx> out(psi.amp.size());
    for (int x = 0; x < psi.geom.position_count; ++x) {
        for (int slot = 0; slot < kCoinSlots; ++slot) {
            const int src = shift_source(psi.geom, x, slot);
            out[flat_index(x, slot)] = src < 0 ? cplx(0.0, 0.0) : psi.amp[flat_index(src, slot)];
        }
    }
    psi.amp = std::move(out);
}

void apply_coin(DensityOperator& rho) {
    ComplexMatrix scratch(rho.m.n);
    coin_conjugate(rho.geom, rho.m.a.data(), scratch.a.data());
    rho.m.a.swap(scratch.a);
}

void apply_shift(DensityOperator& rho) {
    ComplexMatrix scratch(rho.m.n);
    shift_conjugate(rho.geom, rho.m.a.data(), scratch.a.data());
    rho.m.a.swap(scratch.a);
}

void dephase(DensityOperator& rho, DecoherenceTarget target, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("dephasing rate must lie in [0,1]");
    dephase_blend(rho.geom, target, p, rho.m.a.data());
}

DensityOperator decoherent_step(const DensityOperator& rho, const DecoherenceSpec& spec) {
    validate(spec);
    DensityOperator out = rho;
    Evolver ev(rho.geom, spec);
    ev.step(out);
    return out;
}

Evolver::Evolver(const WalkGeometry& geom, const DecoherenceSpec& spec)
    : geom_(geom), spec_(spec), scratch_(geom.dim()) {
    validate(spec);
}

void Evolver::step_unitary(DensityOperator& rho) {
    coin_conjugate(geom_, rho.m.a.data(), scratch_.a.data());
    shift_conjugate(geom_, scratch_.a.data(), rho.m.a.data());
}

void Evolver::step(DensityOperator& rho) {
    step_unitary(rho);
    dephase_blend(geom_, spec_.target, spec_.effective_rate(), rho.m.a.data());
}

void Evolver::step_unitary_adjoint(DensityOperator& rho) {
    unshift_conjugate(geom_, rho.m.a.data(), scratch_.a.data());
    coin_conjugate(geom_, scratch_.a.data(), rho.m.a.data());  // the coin is self-adjoint
}

DensityOperator evolve(DensityOperator rho0, const DecoherenceSpec& spec, int steps,
                       const std::vector<Observer>& observers) {
    validate(spec);
    check_steps_fit(rho0.geom, steps);

    auto notify = [&observers](int t, const DensityOperator& rho) {
        for (const Observer& obs : observers) {
            try {
                obs(t, rho);
            } catch (const std::exception& e) {
                throw std::runtime_error("observer failed at step " + std::to_string(t) + ": " +
                                         e.what());
            }
        }
    };

    notify(0, rho0);
    Evolver ev(rho0.geom, spec);
    for (int t = 1; t <= steps; ++t) {
        ev.step(rho0);
        notify(t, rho0);
    }
    return rho0;
}

}  // namespace qwalk
