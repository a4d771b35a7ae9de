#include "repeater/core.hpp"

#include <cmath>
#include <numeric>

namespace repeater {

ModelParams ModelParams::create(double g, double detuning, double kappa, double gamma) {
    if (!std::isfinite(g) || !std::isfinite(detuning) || !std::isfinite(kappa) ||
        !std::isfinite(gamma)) {
        throw InvalidParameterError("model parameters must be finite");
    }
    if (g <= 0.0) {
        throw InvalidParameterError("coupling g must be positive");
    }
    if (kappa < 0.0) {
        throw InvalidParameterError("cavity decay rate kappa must be non-negative");
    }
    if (gamma < 0.0) {
        throw InvalidParameterError("spontaneous emission rate gamma must be non-negative");
    }
    return ModelParams(g, detuning, kappa, gamma);
}

DerivedParams derive_params(const ModelParams& p) {
    const Complex delta{p.detuning(), 0.5 * (p.kappa() - p.gamma())};
    if (delta == Complex{0.0, 0.0}) {
        throw SingularDetuningError(
            "singular detuning: delta = Delta + i(kappa - gamma)/2 is zero, lambda = g^2/delta "
            "is undefined");
    }
    return DerivedParams{p.g(), delta, p.g() * p.g() / delta};
}

bool large_detuning_check(const ModelParams& p, double factor) {
    if (!(factor > 0.0)) {
        throw InvalidParameterError("large-detuning factor must be positive");
    }
    const Complex delta{p.detuning(), 0.5 * (p.kappa() - p.gamma())};
    return std::abs(delta) >= factor * p.g();
}

std::string ket_label(std::size_t index, std::size_t n_atoms) {
    std::string out(n_atoms, 'e');
    for (std::size_t k = 0; k < n_atoms; ++k) {
        if ((index >> (n_atoms - 1 - k)) & 1U) out[k] = 'g';
    }
    return out;
}

namespace {

template <std::size_t N>
double norm_of(const std::array<Complex, N>& amps) {
    const double sq = std::accumulate(amps.begin(), amps.end(), 0.0,
                                      [](double acc, const Complex& a) { return acc + std::norm(a); });
    return std::sqrt(sq);
}

template <std::size_t N>
std::array<Complex, N> scaled(const std::array<Complex, N>& amps, double norm) {
    if (norm == 0.0 || !std::isfinite(norm)) {
        throw DegenerateMeasurementError("cannot normalize a zero or non-finite state");
    }
    std::array<Complex, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = amps[i] / norm;
    return out;
}

} // namespace

double TwoQubitPureState::norm() const { return norm_of(amps); }

TwoQubitPureState TwoQubitPureState::normalized() const {
    return TwoQubitPureState{labels, scaled(amps, norm())};
}

double FourAtomState::norm() const { return norm_of(amps); }

FourAtomState FourAtomState::normalized() const {
    return FourAtomState{labels, scaled(amps, norm())};
}

PairVariant left_variant(SwapCase c) noexcept {
    return (c == SwapCase::PsiPsi || c == SwapCase::PsiPsiPrime) ? PairVariant::Psi
                                                                 : PairVariant::PsiPrime;
}

PairVariant right_variant(SwapCase c) noexcept {
    return (c == SwapCase::PsiPsi || c == SwapCase::PsiPrimePsi) ? PairVariant::Psi
                                                                 : PairVariant::PsiPrime;
}

SwapCase make_case(PairVariant left, PairVariant right) noexcept {
    if (left == PairVariant::Psi) {
        return right == PairVariant::Psi ? SwapCase::PsiPsi : SwapCase::PsiPsiPrime;
    }
    return right == PairVariant::Psi ? SwapCase::PsiPrimePsi : SwapCase::PsiPrimePsiPrime;
}

std::string_view to_string(SwapCase c) noexcept {
    switch (c) {
    case SwapCase::PsiPsi: return "psi_psi";
    case SwapCase::PsiPsiPrime: return "psi_psiprime";
    case SwapCase::PsiPrimePsi: return "psiprime_psi";
    case SwapCase::PsiPrimePsiPrime: return "psiprime_psiprime";
    }
    return "?";
}

std::string_view to_string(SwapRoute r) noexcept {
    switch (r) {
    case SwapRoute::BsmB: return "bsm_b";
    case SwapRoute::BsmBPrime: return "bsm_bprime";
    case SwapRoute::QedEG: return "qed_eg";
    case SwapRoute::QedGE: return "qed_ge";
    }
    return "?";
}

std::string_view to_string(PairVariant v) noexcept {
    return v == PairVariant::Psi ? "psi" : "psiprime";
}

std::string_view to_string(BellChoice b) noexcept { return b == BellChoice::B ? "b" : "bprime"; }

std::string_view to_string(Outcome o) noexcept { return o == Outcome::EG ? "eg" : "ge"; }

SwapCase parse_case(std::string_view s) {
    for (std::size_t i = 0; i < kAllCases.size(); ++i) {
        if (s == to_string(kAllCases[i]) || s == std::to_string(i + 1)) return kAllCases[i];
    }
    throw InvalidParameterError("unknown case '" + std::string(s) +
                                "' (expected psi_psi, psi_psiprime, psiprime_psi, "
                                "psiprime_psiprime or 1..4)");
}

SwapRoute parse_route(std::string_view s) {
    for (SwapRoute r : kAllRoutes) {
        if (s == to_string(r)) return r;
    }
    throw InvalidParameterError("unknown route '" + std::string(s) +
                                "' (expected bsm_b, bsm_bprime, qed_eg, qed_ge)");
}

BellChoice parse_bell(std::string_view s) {
    if (s == "b" || s == "B") return BellChoice::B;
    if (s == "bprime" || s == "Bprime" || s == "B'") return BellChoice::BPrime;
    throw InvalidParameterError("unknown Bell state '" + std::string(s) + "' (expected b, bprime)");
}

Outcome parse_outcome(std::string_view s) {
    if (s == "eg") return Outcome::EG;
    if (s == "ge") return Outcome::GE;
    throw InvalidParameterError("unknown outcome '" + std::string(s) + "' (expected eg, ge)");
}

} // namespace repeater
