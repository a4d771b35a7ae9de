#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace repeater {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class RepeaterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected physical parameters (negative rates, non-positive coupling, ...).
class InvalidParameterError : public RepeaterError {
public:
    using RepeaterError::RepeaterError;
};

/// delta = Delta + i(kappa - Gamma)/2 vanished, so lambda = g^2/delta is undefined.
class SingularDetuningError : public RepeaterError {
public:
    using RepeaterError::RepeaterError;
};

/// A post-selected outcome has zero probability; the collapsed state is undefined.
class DegenerateMeasurementError : public RepeaterError {
public:
    using RepeaterError::RepeaterError;
};

class DimensionMismatchError : public RepeaterError {
public:
    using RepeaterError::RepeaterError;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Physical rates of one dissipative cavity, all in units of the coupling g.
/// Both atoms share the same detuning and spontaneous-emission rate.
class ModelParams {
public:
    /// Throws InvalidParameterError unless g > 0, kappa >= 0, gamma >= 0 and
    /// every value is finite.
    static ModelParams create(double g, double detuning, double kappa, double gamma);

    double g() const noexcept { return g_; }
    double detuning() const noexcept { return detuning_; }
    double kappa() const noexcept { return kappa_; }
    double gamma() const noexcept { return gamma_; }

    bool operator==(const ModelParams&) const = default;

private:
    ModelParams(double g, double detuning, double kappa, double gamma)
        : g_(g), detuning_(detuning), kappa_(kappa), gamma_(gamma) {}

    double g_;
    double detuning_;
    double kappa_;
    double gamma_;
};

/// Complex detuning delta = Delta + i(kappa - Gamma)/2 and effective exchange
/// rate lambda = g^2 / delta.
struct DerivedParams {
    double g;
    Complex delta;
    Complex lambda;
};

DerivedParams derive_params(const ModelParams& p);

/// True iff |delta| >= factor * g. Only used for warnings.
bool large_detuning_check(const ModelParams& p, double factor = 10.0);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Basis kets are written with 'e' before 'g'; atoms are ordered left to right
/// and the leftmost atom is the most significant bit (e = 0, g = 1).
/// ket_index("egge") == 0b0110.
constexpr std::size_t ket_index(std::string_view ket) {
    std::size_t index = 0;
    for (char c : ket) {
        if (c != 'e' && c != 'g') {
            throw std::invalid_argument("ket labels use only 'e' and 'g'");
        }
        index = (index << 1U) | (c == 'g' ? 1U : 0U);
    }
    return index;
}

std::string ket_label(std::size_t index, std::size_t n_atoms);

enum class TwoQubitKet : std::size_t { EE = 0, EG = 1, GE = 2, GG = 3 };

struct TwoQubitPureState {
    std::array<int, 2> labels{};
    std::array<Complex, 4> amps{};

    Complex& operator[](TwoQubitKet k) { return amps[static_cast<std::size_t>(k)]; }
    const Complex& operator[](TwoQubitKet k) const { return amps[static_cast<std::size_t>(k)]; }

    double norm() const;
    /// Throws DegenerateMeasurementError on the zero vector.
    TwoQubitPureState normalized() const;
};

struct FourAtomState {
    std::array<int, 4> labels{};
    std::array<Complex, 16> amps{};

    Complex& operator[](std::string_view ket) { return amps[ket_index(ket)]; }
    const Complex& operator[](std::string_view ket) const { return amps[ket_index(ket)]; }

    double norm() const;
    FourAtomState normalized() const;
};

/// L1..L6 of the stage-one four-atom state at time t (stored zero-based) and
/// the norm N(t) = sqrt(sum |L_i|^2).
struct StageOneCoefficients {
    std::array<Complex, 6> l{};
    double n = 0.0;
    double t = 0.0;

    /// One-based accessor matching the usual L1..L6 naming.
    const Complex& L(int i) const { return l.at(static_cast<std::size_t>(i - 1)); }
};

// ---------------------------------------------------------------------------
// Protocol tags
// ---------------------------------------------------------------------------

/// Psi: pair state built from (L1, L5), heralded by |eg> on the middle atoms.
/// PsiPrime: built from (L2, L6), heralded by |ge>.
enum class PairVariant { Psi, PsiPrime };

/// B = (|ee> + |gg>)/sqrt2, BPrime = (|eg> + |ge>)/sqrt2.
enum class BellChoice { B, BPrime };

enum class Outcome { EG, GE };

/// The four products (left pair (1,4)) x (right pair (5,8)).
enum class SwapCase { PsiPsi, PsiPsiPrime, PsiPrimePsi, PsiPrimePsiPrime };

enum class SwapRoute { BsmB, BsmBPrime, QedEG, QedGE };

PairVariant left_variant(SwapCase c) noexcept;
PairVariant right_variant(SwapCase c) noexcept;
SwapCase make_case(PairVariant left, PairVariant right) noexcept;

std::string_view to_string(SwapCase c) noexcept;
std::string_view to_string(SwapRoute r) noexcept;
std::string_view to_string(PairVariant v) noexcept;
std::string_view to_string(BellChoice b) noexcept;
std::string_view to_string(Outcome o) noexcept;

/// Accepts the canonical names and the numeric aliases "1".."4".
SwapCase parse_case(std::string_view s);
SwapRoute parse_route(std::string_view s);
BellChoice parse_bell(std::string_view s);
Outcome parse_outcome(std::string_view s);

inline constexpr std::array<SwapCase, 4> kAllCases{
    SwapCase::PsiPsi, SwapCase::PsiPsiPrime, SwapCase::PsiPrimePsi, SwapCase::PsiPrimePsiPrime};
inline constexpr std::array<SwapRoute, 4> kAllRoutes{
    SwapRoute::BsmB, SwapRoute::BsmBPrime, SwapRoute::QedEG, SwapRoute::QedGE};

/// Result of any stage-two swap onto atoms (1,8).
struct SwapOutcome {
    TwoQubitPureState state;
    double probability = 0.0;
    double concurrence = 0.0;
    SwapRoute route = SwapRoute::BsmB;
    SwapCase swap_case = SwapCase::PsiPsi;
};

} // namespace repeater
