#include "repeater/oracle.hpp"

#include "repeater/measures.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace repeater::oracle {

namespace {

constexpr double kUnitTolerance = 1e-10;
// Eigenvalues of rho below this are treated as numerical zeros when forming
// Wootters' tau matrix; pure states then reduce to rank one exactly.
constexpr double kRankTolerance = 1e-14;

std::size_t atom_bit(std::size_t index, std::size_t position, std::size_t n) {
    return (index >> (n - 1 - position)) & 1U;
}

Eigen::VectorXcd excited_frame_state(const Eigen::VectorXcd& pair, int cutoff) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4 * (cutoff + 1));
    for (Eigen::Index a = 0; a < 4; ++a) v[a * (cutoff + 1)] = pair[a];
    return v;
}

} // namespace

OracleHamiltonian build_effective(const DerivedParams& d) {
    OracleHamiltonian h;
    h.kind = HamiltonianKind::Effective;
    h.basis = {"ee", "eg", "ge", "gg"};
    h.matrix = Eigen::MatrixXcd::Zero(4, 4);
    const Complex l = d.lambda;
    // Stark terms: one lambda per excited atom.
    h.matrix(0, 0) = 2.0 * l;
    h.matrix(1, 1) = l;
    h.matrix(2, 2) = l;
    // Exchange s2+ s3- + h.c. couples |eg> and |ge> only.
    h.matrix(1, 2) = l;
    h.matrix(2, 1) = l;
    return h;
}

OracleHamiltonian build_full(const ModelParams& p, int photon_cutoff, double omega_field) {
    if (photon_cutoff < 2) {
        throw InvalidParameterError("build_full: photon cutoff must be at least 2");
    }
    const int levels = photon_cutoff + 1;
    const Eigen::Index dim = 4 * levels;
    const double omega_atom = omega_field + p.detuning();

    OracleHamiltonian h;
    h.kind = HamiltonianKind::Full;
    h.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    h.basis.reserve(static_cast<std::size_t>(dim));

    auto index = [levels](std::size_t atoms, int n) {
        return static_cast<Eigen::Index>(atoms) * levels + n;
    };

    Eigen::VectorXcd free(dim);
    for (std::size_t atoms = 0; atoms < 4; ++atoms) {
        const std::string label = ket_label(atoms, 2);
        int excited = 0;
        double sz = 0.0;
        for (char c : label) {
            excited += c == 'e' ? 1 : 0;
            sz += c == 'e' ? 1.0 : -1.0;
        }
        for (int n = 0; n < levels; ++n) {
            h.basis.push_back(label + "," + std::to_string(n));
            free[index(atoms, n)] =
                Complex{omega_field * n + 0.5 * omega_atom * sz,
                        -0.5 * p.gamma() * excited - 0.5 * p.kappa() * n};
        }
    }
    h.matrix.diagonal() = free;

    // a s_i+ : |.. g_i .., n> -> sqrt(n) |.. e_i .., n-1>, and its adjoint.
    for (std::size_t atoms = 0; atoms < 4; ++atoms) {
        for (std::size_t pos = 0; pos < 2; ++pos) {
            if (atom_bit(atoms, pos, 2) == 0) continue; // atom must be in g
            const std::size_t raised = atoms & ~(std::size_t{1} << (1 - pos));
            for (int n = 1; n < levels; ++n) {
                const double amp = p.g() * std::sqrt(static_cast<double>(n));
                h.matrix(index(raised, n - 1), index(atoms, n)) += amp;
                h.matrix(index(atoms, n), index(raised, n - 1)) += amp;
            }
        }
    }

    h.frame = FullModelFrame{omega_field, omega_atom, photon_cutoff, free};
    return h;
}

Eigen::MatrixXcd evolution_operator(const Eigen::MatrixXcd& h, double duration) {
    if (h.rows() != h.cols()) {
        throw DimensionMismatchError("evolution_operator: Hamiltonian must be square");
    }
    if (duration == 0.0) return Eigen::MatrixXcd::Identity(h.rows(), h.cols());
    const Eigen::MatrixXcd generator = Complex{0.0, -duration} * h;
    return generator.exp();
}

Eigen::MatrixXcd evolution_operator_eigen(const Eigen::MatrixXcd& h, double duration,
                                          double max_condition) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
        throw RepeaterError("evolution_operator_eigen: eigendecomposition failed");
    }
    const Eigen::MatrixXcd& v = es.eigenvectors();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues();
    const double condition = sv[0] / sv[sv.size() - 1];
    if (!(condition <= max_condition)) {
        std::ostringstream msg;
        msg << "evolution_operator_eigen: eigenvector condition number " << condition
            << " exceeds " << max_condition;
        throw RepeaterError(msg.str());
    }
    const Eigen::VectorXcd phases = (Complex{0.0, -duration} * es.eigenvalues()).array().exp();
    return v * phases.asDiagonal() * v.inverse();
}

Eigen::VectorXcd propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                           double duration) {
    if (h.cols() != psi0.size()) {
        throw DimensionMismatchError("propagate: state dimension " + std::to_string(psi0.size()) +
                                     " does not match Hamiltonian dimension " +
                                     std::to_string(h.cols()));
    }
    if (duration == 0.0) return psi0;
    return evolution_operator(h, duration) * psi0;
}

Eigen::VectorXcd propagate(const OracleHamiltonian& h, const Eigen::VectorXcd& psi0,
                           double duration) {
    return propagate(h.matrix, psi0, duration);
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int qubits_before, int qubits_after) {
    const Eigen::Index before = Eigen::Index{1} << qubits_before;
    const Eigen::Index after = Eigen::Index{1} << qubits_after;
    const Eigen::Index d = op.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(before * d * after, before * d * after);
    for (Eigen::Index b = 0; b < before; ++b) {
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                if (op(i, j) == Complex{}) continue;
                for (Eigen::Index a = 0; a < after; ++a) {
                    out((b * d + i) * after + a, (b * d + j) * after + a) = op(i, j);
                }
            }
        }
    }
    return out;
}

LabeledState labeled(const TwoQubitPureState& s) {
    return LabeledState{{s.labels[0], s.labels[1]}, to_vector(s)};
}

LabeledState labeled(const FourAtomState& s) {
    return LabeledState{{s.labels.begin(), s.labels.end()}, to_vector(s)};
}

LabeledState tensor(const LabeledState& a, const LabeledState& b) {
    LabeledState out;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    out.amps.resize(a.amps.size() * b.amps.size());
    for (Eigen::Index i = 0; i < a.amps.size(); ++i) {
        out.amps.segment(i * b.amps.size(), b.amps.size()) = a.amps[i] * b.amps;
    }
    return out;
}

LabeledState permute(const LabeledState& s, const std::vector<int>& order) {
    const std::size_t n = s.labels.size();
    if (order.size() != n || !std::is_permutation(order.begin(), order.end(), s.labels.begin())) {
        throw DimensionMismatchError("permute: order must be a permutation of the labels");
    }
    std::vector<std::size_t> source(n);
    for (std::size_t k = 0; k < n; ++k) {
        source[k] = static_cast<std::size_t>(
            std::find(s.labels.begin(), s.labels.end(), order[k]) - s.labels.begin());
    }
    LabeledState out{order, Eigen::VectorXcd(s.amps.size())};
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(s.amps.size()); ++idx) {
        std::size_t old = 0;
        for (std::size_t k = 0; k < n; ++k) {
            old |= atom_bit(idx, k, n) << (n - 1 - source[k]);
        }
        out.amps[static_cast<Eigen::Index>(idx)] = s.amps[static_cast<Eigen::Index>(old)];
    }
    return out;
}

PostSelection postselect(const LabeledState& state, const std::vector<int>& atoms,
                         const Eigen::VectorXcd& outcome) {
    const std::size_t n = state.labels.size();
    const std::size_t k = atoms.size();
    if (state.amps.size() != (Eigen::Index{1} << n)) {
        throw DimensionMismatchError("postselect: amplitude count does not match labels");
    }
    if (outcome.size() != (Eigen::Index{1} << k)) {
        throw DimensionMismatchError("postselect: outcome dimension does not match atom subset");
    }
    if (std::abs(outcome.norm() - 1.0) > kUnitTolerance) {
        throw InvalidParameterError("postselect: outcome must be normalized");
    }
    std::vector<std::size_t> measured_pos(k);
    std::vector<bool> is_measured(n, false);
    for (std::size_t j = 0; j < k; ++j) {
        const auto it = std::find(state.labels.begin(), state.labels.end(), atoms[j]);
        if (it == state.labels.end()) {
            throw DimensionMismatchError("postselect: atom " + std::to_string(atoms[j]) +
                                         " is not part of the state");
        }
        measured_pos[j] = static_cast<std::size_t>(it - state.labels.begin());
        if (is_measured[measured_pos[j]]) {
            throw DimensionMismatchError("postselect: atom listed twice");
        }
        is_measured[measured_pos[j]] = true;
    }
    std::vector<std::size_t> kept_pos;
    PostSelection out;
    for (std::size_t p = 0; p < n; ++p) {
        if (!is_measured[p]) {
            kept_pos.push_back(p);
            out.state.labels.push_back(state.labels[p]);
        }
    }
    const std::size_t m = kept_pos.size();
    out.raw = Eigen::VectorXcd::Zero(Eigen::Index{1} << m);
    for (std::size_t r = 0; r < (std::size_t{1} << m); ++r) {
        Complex acc{};
        for (std::size_t a = 0; a < (std::size_t{1} << k); ++a) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < k; ++j) idx |= atom_bit(a, j, k) << (n - 1 - measured_pos[j]);
            for (std::size_t j = 0; j < m; ++j) idx |= atom_bit(r, j, m) << (n - 1 - kept_pos[j]);
            acc += std::conj(outcome[static_cast<Eigen::Index>(a)]) *
                   state.amps[static_cast<Eigen::Index>(idx)];
        }
        out.raw[static_cast<Eigen::Index>(r)] = acc;
    }
    const double total = state.amps.squaredNorm();
    out.probability = total > 0.0 ? out.raw.squaredNorm() / total : 0.0;
    if (!(out.probability > 0.0)) {
        throw DegenerateMeasurementError("postselect: outcome has zero probability");
    }
    out.state.amps = out.raw / out.raw.norm();
    return out;
}

Eigen::VectorXcd ket_vector(std::string_view ket) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << ket.size());
    v[static_cast<Eigen::Index>(ket_index(ket))] = 1.0;
    return v;
}

Eigen::VectorXcd bell_vector(BellChoice bell) {
    const double h = std::numbers::sqrt2 / 2.0;
    return bell == BellChoice::B ? Eigen::VectorXcd(h * (ket_vector("ee") + ket_vector("gg")))
                                 : Eigen::VectorXcd(h * (ket_vector("eg") + ket_vector("ge")));
}

LabeledState initial_product(std::array<int, 4> labels) {
    const double h = std::numbers::sqrt2 / 2.0;
    const Eigen::VectorXcd singlet = h * (ket_vector("eg") - ket_vector("ge"));
    return tensor(LabeledState{{labels[0], labels[1]}, singlet},
                  LabeledState{{labels[2], labels[3]}, singlet});
}

PropagatedState stage1_by_propagation(const DerivedParams& d, double t,
                                      std::array<int, 4> labels) {
    const LabeledState psi0 = initial_product(labels);
    const Eigen::MatrixXcd h = embed(build_effective(d).matrix, 1, 1);
    PropagatedState out;
    out.raw = propagate(h, psi0.amps, t);
    out.normalized = LabeledState{psi0.labels, out.raw / out.raw.norm()};
    return out;
}

LabeledState qed_joint_by_propagation(const TwoQubitPureState& left,
                                      const TwoQubitPureState& right, const DerivedParams& d,
                                      double duration) {
    const LabeledState psi0 = tensor(labeled(left), labeled(right));
    const Eigen::MatrixXcd h = embed(build_effective(d).matrix, 1, 1);
    return LabeledState{psi0.labels, propagate(h, psi0.amps, duration)};
}

namespace {

struct FullRun {
    Eigen::MatrixXcd u_full;
    Eigen::VectorXcd to_interaction; // diag of exp(+i H0 t)
    int cutoff;
};

FullRun make_full_run(const ModelParams& p, double t, int cutoff, double omega) {
    const OracleHamiltonian full = build_full(p, cutoff, omega);
    FullRun run{evolution_operator(full.matrix, t),
                (Complex{0.0, t} * full.frame->free_diagonal).array().exp(), cutoff};
    return run;
}

// Returns the vacuum-sector pair amplitudes and the vacuum weight.
std::pair<Eigen::VectorXcd, double> evolve_pair(const FullRun& run, const Eigen::VectorXcd& pair) {
    const Eigen::VectorXcd psi =
        run.to_interaction.cwiseProduct(run.u_full * excited_frame_state(pair, run.cutoff));
    Eigen::VectorXcd vac(4);
    for (Eigen::Index a = 0; a < 4; ++a) vac[a] = psi[a * (run.cutoff + 1)];
    const double total = psi.squaredNorm();
    return {vac, total > 0.0 ? vac.squaredNorm() / total : 0.0};
}

// Applies a per-(2,3) map to a four-atom (1,2,3,4) vector with atoms 1 and 4
// as spectators. `map` returns the mapped pair vector and its total weight.
template <typename Map>
std::pair<Eigen::VectorXcd, double> apply_middle(const Eigen::VectorXcd& four, Map&& map) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(16);
    double kept = 0.0;
    double total = 0.0;
    for (std::size_t s1 = 0; s1 < 2; ++s1) {
        for (std::size_t s4 = 0; s4 < 2; ++s4) {
            Eigen::VectorXcd pair(4);
            for (std::size_t m = 0; m < 4; ++m) {
                pair[static_cast<Eigen::Index>(m)] =
                    four[static_cast<Eigen::Index>((s1 << 3U) | (m << 1U) | s4)];
            }
            if (pair.squaredNorm() == 0.0) continue;
            const auto [mapped, weight] = map(pair);
            for (std::size_t m = 0; m < 4; ++m) {
                out[static_cast<Eigen::Index>((s1 << 3U) | (m << 1U) | s4)] =
                    mapped[static_cast<Eigen::Index>(m)];
            }
            kept += mapped.squaredNorm();
            total += weight > 0.0 ? mapped.squaredNorm() / weight : 0.0;
        }
    }
    return {out, total > 0.0 ? kept / total : 0.0};
}

double infidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return compare_states(a / a.norm(), b / b.norm()).infidelity;
}

} // namespace

FullEffectiveReport full_vs_effective_report(const ModelParams& p, double t,
                                             const FullEffectiveOptions& opts) {
    const DerivedParams d = derive_params(p);
    const Eigen::MatrixXcd u_eff = evolution_operator(build_effective(d).matrix, t);
    const FullRun run = make_full_run(p, t, opts.photon_cutoff, opts.omega_field);
    const FullRun run_next = make_full_run(p, t, opts.photon_cutoff + 1, opts.omega_field);

    FullEffectiveReport report;
    report.t = t;
    report.large_detuning = large_detuning_check(p);

    auto full_map = [](const FullRun& r) {
        return [&r](const Eigen::VectorXcd& pair) { return evolve_pair(r, pair); };
    };
    auto record = [&](std::string name, const Eigen::VectorXcd& full,
                      const Eigen::VectorXcd& full_next, double vacuum_weight,
                      const Eigen::VectorXcd& eff) {
        report.rows.push_back({std::move(name), infidelity(full, eff), vacuum_weight});
        report.max_infidelity = std::max(report.max_infidelity, report.rows.back().infidelity);
        report.cutoff_discrepancy =
            std::max(report.cutoff_discrepancy, (full / full.norm() - full_next / full_next.norm())
                                                    .cwiseAbs()
                                                    .maxCoeff());
    };

    for (std::string_view ket : {"ee", "eg", "ge", "gg"}) {
        const Eigen::VectorXcd pair = ket_vector(ket);
        const auto [full, weight] = evolve_pair(run, pair);
        const auto [full_next, unused] = evolve_pair(run_next, pair);
        record(std::string(ket), full, full_next, weight, u_eff * pair);
    }

    const Eigen::VectorXcd product = initial_product({1, 2, 3, 4}).amps;
    const auto [full, weight] = apply_middle(product, full_map(run));
    const auto [full_next, unused] = apply_middle(product, full_map(run_next));
    const Eigen::VectorXcd eff = embed(u_eff, 1, 1) * product;
    record("initial_product", full, full_next, weight, eff);
    return report;
}

Eigen::Matrix4cd density_matrix(const TwoQubitPureState& s) {
    const Eigen::Vector4cd v = Eigen::Map<const Eigen::Vector4cd>(s.amps.data());
    return v * v.adjoint();
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    if (!rho.allFinite()) {
        throw InvalidDensityMatrixError("wootters_concurrence: non-finite entries");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kUnitTolerance) {
        throw InvalidDensityMatrixError("wootters_concurrence: rho is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kUnitTolerance) {
        throw InvalidDensityMatrixError("wootters_concurrence: trace of rho is not 1");
    }
    const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
    if (es.eigenvalues().minCoeff() < -kUnitTolerance) {
        throw InvalidDensityMatrixError("wootters_concurrence: rho is not positive semidefinite");
    }

    // Subnormalized eigenvectors w_k = sqrt(p_k) v_k. The square roots of the
    // eigenvalues of rho (sy x sy) rho* (sy x sy) are the singular values of
    // tau = W^T (sy x sy) W.
    std::vector<Eigen::Vector4cd> cols;
    for (int k = 0; k < 4; ++k) {
        const double pk = es.eigenvalues()[k];
        if (pk > kRankTolerance) cols.emplace_back(std::sqrt(pk) * es.eigenvectors().col(k));
    }
    Eigen::MatrixXcd w(4, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = cols[k];

    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::MatrixXcd tau = w.transpose() * yy * w;
    Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(tau).singularValues();
    double c = sv.size() > 0 ? sv[0] : 0.0;
    for (Eigen::Index i = 1; i < sv.size(); ++i) c -= sv[i];
    return std::clamp(c, 0.0, 1.0);
}

} // namespace repeater::oracle
