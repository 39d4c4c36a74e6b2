#pragma once

#include <functional>
#include <vector>

#include "qwalk/state_space.hpp"

namespace qwalk {

enum class DecoherenceTarget { None, CoinOnly, PositionOnly, Both };

// Per-step dephasing: with probability p a projective event acts on the chosen
// subsystem. Evolution uses the exact ensemble average of that event, so the
// dynamics is deterministic: rho <- (1-p) U rho U^+ + p Mask(U rho U^+), where
// Mask zeroes the channel's off-diagonal entries and U = S C is the unitary step.
struct DecoherenceSpec {
    DecoherenceTarget target = DecoherenceTarget::None;
    double rate = 0.0;

    double effective_rate() const {
        return target == DecoherenceTarget::None ? 0.0 : rate;
    }
};

void validate(const DecoherenceSpec& spec);  // throws if rate outside [0,1]

// Coin toss: every position's 2-dim coin block is hit by the fixed unitary
// sending |-1> -> (|+1> - |-1>)/sqrt2 and |+1> -> (|-1> + |+1>)/sqrt2.
void apply_coin(PureState& psi);
void apply_coin(DensityOperator& rho);  // conjugation C rho C^+

// Conditional shift: amplitude at (x,c) moves to (x+c,c); cycles wrap mod N.
void apply_shift(PureState& psi);
void apply_shift(DensityOperator& rho);  // conjugation S rho S^+

// In-place blend rho <- (1-p) rho + p Mask(rho). Kept entries are untouched,
// so the operation is idempotent at p=1 and exactly trace/Hermiticity preserving.
void dephase(DensityOperator& rho, DecoherenceTarget target, double p);

// One full decoherent time step (unitary step, then dephasing blend).
DensityOperator decoherent_step(const DensityOperator& rho, const DecoherenceSpec& spec);

// Allocation-free stepper for long evolutions: owns the scratch buffer the
// conjugation kernels ping-pong through.
class Evolver {
  public:
    Evolver(const WalkGeometry& geom, const DecoherenceSpec& spec);

    void step(DensityOperator& rho);          // decoherent step in place
    void step_unitary(DensityOperator& rho);  // p=0 step in place
    // Inverse of the p=0 step (C^+ S^+ rho S C); used by unitarity tests.
    void step_unitary_adjoint(DensityOperator& rho);

  private:
    WalkGeometry geom_;
    DecoherenceSpec spec_;
    ComplexMatrix scratch_;
};

using Observer = std::function<void(int t, const DensityOperator& rho)>;

// Applies `steps` decoherent steps to rho0. Observers run on (0, rho0) before
// any stepping and then on (t, rho(t)) after each step. On a line geometry,
// steps must not exceed the window extent (the walker would reach the edge).
DensityOperator evolve(DensityOperator rho0, const DecoherenceSpec& spec, int steps,
                       const std::vector<Observer>& observers = {});

}  // namespace qwalk
