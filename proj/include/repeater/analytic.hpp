#pragma once

// Closed-form repeater pipeline.
//
// Stage one: Bell pairs (1,2),(3,4) with |Psi> = (|eg> - |ge>)/sqrt2 evolve
// for time t while atoms (2,3) interact dispersively in a lossy cavity. The
// four-atom state keeps six kets with amplitudes L1..L6; measuring (2,3) in
// |eg> or |ge> heralds an entangled pair (1,4). The same happens for (5,8).
//
// Stage two swaps the entanglement onto (1,8) either by a Bell measurement on
// (4,5) or by letting (4,5) interact for a further time tau - t and then
// measuring them in |eg> or |ge>.

#include "repeater/core.hpp"

#include <utility>

namespace repeater {

/// Throws InvalidParameterError if t < 0.
StageOneCoefficients stage1_coefficients(const DerivedParams& d, double t);

/// Normalized six-ket state on labels (1,2,3,4) or (5,6,7,8).
FourAtomState stage1_state(const DerivedParams& d, double t, std::array<int, 4> labels);

struct PairCollapse {
    TwoQubitPureState state;
    double probability = 0.0;
};

/// Measures the middle atoms of a stage-one block. Outcome EG heralds the Psi
/// pair (L1|eg> + L5|ge>), GE heralds Psi' (L2|eg> + L6|ge>). The
/// probability is the Born weight of the outcome in the normalized four-atom
/// state. `labels` must be (1,4) or (5,8).
PairCollapse collapse_pair(const StageOneCoefficients& c, Outcome outcome,
                           std::array<int, 2> labels);

/// Unnormalized (alpha, beta) amplitudes of the heralded pair:
/// Psi -> (L1, L5), Psi' -> (L2, L6).
std::pair<Complex, Complex> pair_amplitudes(const StageOneCoefficients& c, PairVariant v);

/// Normalized pair state for the given variant.
TwoQubitPureState pair_state(const StageOneCoefficients& c, PairVariant v,
                             std::array<int, 2> labels);

/// True if this case/Bell combination produces an exact Bell state on (1,8).
bool bsm_yields_bell(SwapCase c, BellChoice bell) noexcept;

/// Closed-form success probability of a Bell measurement on (4,5).
///
/// Bell-producing combinations use the published expressions, which
/// normalize with (|L1|^2 + |L5|^2)^2 throughout. The remaining combinations
/// use the Born weight (|x1 x2|^2 + |y1 y2|^2) / (2 n_left^2 n_right^2) with
/// (x, y) the pair amplitudes that survive the projection.
double bsm_probability(SwapCase c, BellChoice bell, const StageOneCoefficients& coeffs);

/// Bell measurement on atoms (4,5). Returns the (1,8) state, the closed-form
/// probability and the concurrence measured on the returned state. Throws
/// DegenerateMeasurementError when the outcome has zero probability.
SwapOutcome bsm_swap(PairVariant left, PairVariant right, BellChoice bell,
                     const StageOneCoefficients& c);

/// Four-atom state on (1,4,5,8) after atoms (4,5) interact from t to tau under
/// the effective Hamiltonian, starting from the normalized product of the two
/// heralded pairs. Not renormalized: its norm decays (or grows) with the
/// non-Hermitian dynamics. Throws InvalidParameterError if tau < t.
FourAtomState qed_joint_state(PairVariant left, PairVariant right, const StageOneCoefficients& c,
                              const DerivedParams& d, double tau);

/// Measures atoms (4,5) of a joint state from qed_joint_state. The (1,8)
/// amplitudes are read off the |x e g y> (outcome EG) or |x g e y> (outcome
/// GE) kets; probability is their weight relative to the joint-state norm.
SwapOutcome qed_collapse(const FourAtomState& joint, Outcome outcome, SwapCase swap_case);

/// Convenience: one (case, route) evaluation at stage-one time t and, for QED
/// routes, interaction end time tau.
SwapOutcome evaluate_route(SwapCase c, SwapRoute route, const DerivedParams& d, double t,
                           double tau);

} // namespace repeater
