#pragma once

// Numerical ground truth for the closed-form pipeline: dense matrix
// exponentials of the effective two-atom Hamiltonian and of the full
// dissipative two-atom + single-mode cavity model, plus generic projective
// post-selection on labeled multi-qubit states.

#include "repeater/core.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace repeater::oracle {

class InvalidDensityMatrixError : public RepeaterError {
public:
    using RepeaterError::RepeaterError;
};

enum class HamiltonianKind { Effective, Full };

inline constexpr int kDefaultPhotonCutoff = 3;
/// Cavity frequency used by the full model, in units of g. Only Delta enters
/// interaction-picture results; this value is exposed for invariance tests.
inline constexpr double kDefaultFieldFrequency = 5.0;

/// Bare frequencies and the diagonal free part H0 of the full model.
struct FullModelFrame {
    double omega_field = kDefaultFieldFrequency;
    double omega_atom = kDefaultFieldFrequency;
    int photon_cutoff = kDefaultPhotonCutoff;
    Eigen::VectorXcd free_diagonal;
};

struct OracleHamiltonian {
    HamiltonianKind kind = HamiltonianKind::Effective;
    Eigen::MatrixXcd matrix;
    /// Ket labels: "eg" for the effective model, "eg,1" (atoms 2,3 and photon
    /// number) for the full model.
    std::vector<std::string> basis;
    std::optional<FullModelFrame> frame;

    Eigen::Index dim() const noexcept { return matrix.rows(); }
};

/// lambda (n2 + n3) + lambda (s2+ s3- + s3+ s2-) on (|ee>, |eg>, |ge>, |gg>).
OracleHamiltonian build_effective(const DerivedParams& d);

/// H0 + H1 on atom2 (x) atom3 (x) |n>, n = 0..photon_cutoff, with
///   H0 = w a+a + (wa/2)(sz2 + sz3) - i(Gamma/2)(n2 + n3) - i(kappa/2) a+a
///   H1 = g sum_i (a s_i+ + a+ s_i-)
/// and wa = w + Delta. Index = (atom2 * 2 + atom3) * (cutoff + 1) + n.
/// Throws InvalidParameterError if photon_cutoff < 2.
OracleHamiltonian build_full(const ModelParams& p, int photon_cutoff = kDefaultPhotonCutoff,
                             double omega_field = kDefaultFieldFrequency);

/// exp(-i H duration) via scaling and squaring with Pade approximants.
Eigen::MatrixXcd evolution_operator(const Eigen::MatrixXcd& h, double duration);

/// Same map through a complex eigendecomposition. Throws RepeaterError when
/// the eigenvector matrix has condition number above max_condition.
Eigen::MatrixXcd evolution_operator_eigen(const Eigen::MatrixXcd& h, double duration,
                                          double max_condition = 1e8);

/// exp(-i H duration) psi0, not renormalized.
Eigen::VectorXcd propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                           double duration);
Eigen::VectorXcd propagate(const OracleHamiltonian& h, const Eigen::VectorXcd& psi0,
                           double duration);

/// I(2^before) (x) op (x) I(2^after).
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int qubits_before, int qubits_after);

/// Qubit register with atom labels; amplitude index follows the same
/// e = 0, leftmost-most-significant convention as the core state types.
struct LabeledState {
    std::vector<int> labels;
    Eigen::VectorXcd amps;
};

LabeledState labeled(const TwoQubitPureState& s);
LabeledState labeled(const FourAtomState& s);
LabeledState tensor(const LabeledState& a, const LabeledState& b);

/// Re-orders the register so its labels appear in `order`.
LabeledState permute(const LabeledState& s, const std::vector<int>& order);

struct PostSelection {
    LabeledState state; ///< normalized, remaining atoms in original order
    double probability = 0.0;
    Eigen::VectorXcd raw; ///< unnormalized partial inner product
};

/// Projects `atoms` of `state` onto `outcome` (normalized, 2^k entries with
/// the first listed atom most significant). The Born probability is taken
/// relative to the normalized input. Throws DegenerateMeasurementError on a
/// zero-probability outcome and DimensionMismatchError on shape errors.
PostSelection postselect(const LabeledState& state, const std::vector<int>& atoms,
                         const Eigen::VectorXcd& outcome);

Eigen::VectorXcd ket_vector(std::string_view ket);
Eigen::VectorXcd bell_vector(BellChoice bell);

/// (|eg> - |ge>)/sqrt2 on (1,2) times the same on (3,4), or on (5,6),(7,8).
LabeledState initial_product(std::array<int, 4> labels);

/// Stage-one state by propagating the initial product under the effective
/// Hamiltonian on the middle atoms. `raw` keeps the decayed norm.
struct PropagatedState {
    LabeledState normalized;
    Eigen::VectorXcd raw;
};
PropagatedState stage1_by_propagation(const DerivedParams& d, double t,
                                      std::array<int, 4> labels = {1, 2, 3, 4});

/// (1,4,5,8) joint state by propagating the normalized product of the two
/// heralded pairs under the effective Hamiltonian on (4,5) for tau - t.
LabeledState qed_joint_by_propagation(const TwoQubitPureState& left,
                                      const TwoQubitPureState& right, const DerivedParams& d,
                                      double duration);

// ---------------------------------------------------------------------------
// Full model vs effective model
// ---------------------------------------------------------------------------

struct FullEffectiveOptions {
    int photon_cutoff = kDefaultPhotonCutoff;
    double omega_field = kDefaultFieldFrequency;
};

struct FullEffectiveRow {
    std::string initial_state;
    double infidelity = 0.0;
    /// Weight left in the cavity-vacuum sector of the normalized
    /// interaction-picture state.
    double vacuum_weight = 1.0;
};

struct FullEffectiveReport {
    double t = 0.0;
    std::vector<FullEffectiveRow> rows;
    double max_infidelity = 0.0;
    /// Max amplitude difference between runs at cutoff c and c + 1.
    double cutoff_discrepancy = 0.0;
    bool large_detuning = true;
};

/// Evolves (2,3) initial states |ee>, |eg>, |ge>, |gg> and the four-atom
/// initial product (atoms 1 and 4 as spectators) with the cavity in vacuum
/// under the full model, moves to the interaction picture with exp(+i H0 t),
/// projects the cavity on vacuum and compares with the effective model.
FullEffectiveReport full_vs_effective_report(const ModelParams& p, double t,
                                             const FullEffectiveOptions& opts = {});

/// Wootters concurrence of a two-qubit density matrix. Throws
/// InvalidDensityMatrixError unless rho is Hermitian, positive semidefinite
/// and of unit trace within 1e-10.
double wootters_concurrence(const Eigen::Matrix4cd& rho);

Eigen::Matrix4cd density_matrix(const TwoQubitPureState& s);

} // namespace repeater::oracle
