#include "repeater/analytic.hpp"

#include "repeater/measures.hpp"

#include <cmath>
#include <numbers>

namespace repeater {

namespace {

void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidParameterError(std::string(what) + ": time must be finite and non-negative");
    }
}

bool degenerate(double probability) { return !(probability > 0.0); }

TwoQubitPureState bell_state(BellChoice bell, std::array<int, 2> labels) {
    const double h = std::numbers::sqrt2 / 2.0;
    TwoQubitPureState s{labels, {}};
    if (bell == BellChoice::B) {
        s[TwoQubitKet::EE] = h;
        s[TwoQubitKet::GG] = h;
    } else {
        s[TwoQubitKet::EG] = h;
        s[TwoQubitKet::GE] = h;
    }
    return s;
}

constexpr std::array<int, 2> kEndPair{1, 8};

} // namespace

StageOneCoefficients stage1_coefficients(const DerivedParams& d, double t) {
    require_time(t, "stage1_coefficients");
    // With w = exp(-2i lambda t):
    //   -(i/2) e^{-i lambda t} sin(lambda t) = (w - 1)/4
    //    (1/2) e^{-i lambda t} cos(lambda t) = (w + 1)/4
    // which stays finite for large |Im(lambda) t| where sin/cos overflow.
    const Complex w = std::exp(-2.0 * kI * d.lambda * t);
    StageOneCoefficients c;
    c.t = t;
    c.l[0] = (w - 1.0) / 4.0;
    c.l[1] = (w + 1.0) / 4.0;
    c.l[2] = -0.5;
    c.l[3] = -0.5 * w;
    c.l[4] = c.l[1];
    c.l[5] = c.l[0];
    double sq = 0.0;
    for (const Complex& l : c.l) sq += std::norm(l);
    c.n = std::sqrt(sq);
    return c;
}

FourAtomState stage1_state(const DerivedParams& d, double t, std::array<int, 4> labels) {
    if (labels != std::array<int, 4>{1, 2, 3, 4} && labels != std::array<int, 4>{5, 6, 7, 8}) {
        throw InvalidParameterError("stage1_state: labels must be (1,2,3,4) or (5,6,7,8)");
    }
    const StageOneCoefficients c = stage1_coefficients(d, t);
    FourAtomState s{labels, {}};
    s["eegg"] = c.L(1) / c.n;
    s["egeg"] = c.L(2) / c.n;
    s["egge"] = c.L(3) / c.n;
    s["geeg"] = c.L(4) / c.n;
    s["gege"] = c.L(5) / c.n;
    s["ggee"] = c.L(6) / c.n;
    return s;
}

std::pair<Complex, Complex> pair_amplitudes(const StageOneCoefficients& c, PairVariant v) {
    return v == PairVariant::Psi ? std::pair{c.L(1), c.L(5)} : std::pair{c.L(2), c.L(6)};
}

TwoQubitPureState pair_state(const StageOneCoefficients& c, PairVariant v,
                             std::array<int, 2> labels) {
    const auto [x, y] = pair_amplitudes(c, v);
    TwoQubitPureState s{labels, {}};
    s[TwoQubitKet::EG] = x;
    s[TwoQubitKet::GE] = y;
    return s.normalized();
}

PairCollapse collapse_pair(const StageOneCoefficients& c, Outcome outcome,
                           std::array<int, 2> labels) {
    if (labels != std::array<int, 2>{1, 4} && labels != std::array<int, 2>{5, 8}) {
        throw InvalidParameterError("collapse_pair: labels must be (1,4) or (5,8)");
    }
    const PairVariant v = outcome == Outcome::EG ? PairVariant::Psi : PairVariant::PsiPrime;
    const auto [x, y] = pair_amplitudes(c, v);
    const double probability = (std::norm(x) + std::norm(y)) / (c.n * c.n);
    if (degenerate(probability)) {
        throw DegenerateMeasurementError("collapse_pair: outcome " +
                                         std::string(to_string(outcome)) +
                                         " has zero probability");
    }
    return PairCollapse{pair_state(c, v, labels), probability};
}

bool bsm_yields_bell(SwapCase c, BellChoice bell) noexcept {
    const bool same = left_variant(c) == right_variant(c);
    return same == (bell == BellChoice::B);
}

double bsm_probability(SwapCase sc, BellChoice bell, const StageOneCoefficients& c) {
    const double n15 = std::norm(c.L(1)) + std::norm(c.L(5));
    if (bsm_yields_bell(sc, bell)) {
        switch (sc) {
        case SwapCase::PsiPsi:
            return std::norm(c.L(1) * c.L(5)) / (n15 * n15);
        case SwapCase::PsiPsiPrime:
        case SwapCase::PsiPrimePsi:
            return (std::norm(c.L(1) * c.L(2)) + std::norm(c.L(5) * c.L(6))) / (2.0 * n15 * n15);
        case SwapCase::PsiPrimePsiPrime:
            return std::norm(c.L(2) * c.L(6)) / (n15 * n15);
        }
    }
    const auto [x1, y1] = pair_amplitudes(c, left_variant(sc));
    const auto [x2, y2] = pair_amplitudes(c, right_variant(sc));
    const double nl = std::norm(x1) + std::norm(y1);
    const double nr = std::norm(x2) + std::norm(y2);
    const double w = bell == BellChoice::B ? std::norm(x1 * y2) + std::norm(y1 * x2)
                                           : std::norm(x1 * x2) + std::norm(y1 * y2);
    return w / (2.0 * nl * nr);
}

SwapOutcome bsm_swap(PairVariant left, PairVariant right, BellChoice bell,
                     const StageOneCoefficients& c) {
    const SwapCase sc = make_case(left, right);
    SwapOutcome out;
    out.swap_case = sc;
    out.route = bell == BellChoice::B ? SwapRoute::BsmB : SwapRoute::BsmBPrime;
    out.probability = bsm_probability(sc, bell, c);
    if (degenerate(out.probability)) {
        throw DegenerateMeasurementError("bsm_swap: Bell outcome " + std::string(to_string(bell)) +
                                         " has zero probability for case " +
                                         std::string(to_string(sc)));
    }

    if (bsm_yields_bell(sc, bell)) {
        out.state = bell_state(bell, kEndPair);
    } else {
        // Projecting (x1|eg> + y1|ge>)_{14} (x2|eg> + y2|ge>)_{58} on (4,5):
        //   B  keeps x1 y2 |ee> + y1 x2 |gg>
        //   B' keeps x1 x2 |eg> + y1 y2 |ge>
        const auto [x1, y1] = pair_amplitudes(c, left);
        const auto [x2, y2] = pair_amplitudes(c, right);
        TwoQubitPureState s{kEndPair, {}};
        if (bell == BellChoice::B) {
            s[TwoQubitKet::EE] = x1 * y2;
            s[TwoQubitKet::GG] = y1 * x2;
        } else {
            s[TwoQubitKet::EG] = x1 * x2;
            s[TwoQubitKet::GE] = y1 * y2;
        }
        out.state = s.normalized();
    }
    out.concurrence = concurrence_pure(out.state);
    return out;
}

FourAtomState qed_joint_state(PairVariant left, PairVariant right, const StageOneCoefficients& c,
                              const DerivedParams& d, double tau) {
    require_time(tau, "qed_joint_state");
    if (tau < c.t) {
        throw InvalidParameterError("qed_joint_state: interaction end time tau must be >= t");
    }
    const auto [x1, y1] = pair_amplitudes(c, left);
    const auto [x2, y2] = pair_amplitudes(c, right);
    const double scale =
        1.0 / std::sqrt((std::norm(x1) + std::norm(y1)) * (std::norm(x2) + std::norm(y2)));
    const Complex u = std::exp(-2.0 * kI * d.lambda * (tau - c.t));
    const Complex minus = 0.5 * (u - 1.0);
    const Complex plus = 0.5 * (u + 1.0);

    FourAtomState s{{1, 4, 5, 8}, {}};
    s["eegg"] = scale * x1 * x2 * minus;
    s["egeg"] = scale * x1 * x2 * plus;
    s["egge"] = scale * x1 * y2;
    s["geeg"] = scale * y1 * x2 * u;
    s["gege"] = scale * y1 * y2 * plus;
    s["ggee"] = scale * y1 * y2 * minus;
    return s;
}

SwapOutcome qed_collapse(const FourAtomState& joint, Outcome outcome, SwapCase swap_case) {
    if (joint.labels != std::array<int, 4>{1, 4, 5, 8}) {
        throw InvalidParameterError("qed_collapse: joint state must be on atoms (1,4,5,8)");
    }
    // Middle two characters are atoms (4,5).
    const std::string_view mid = outcome == Outcome::EG ? "eg" : "ge";
    TwoQubitPureState s{kEndPair, {}};
    for (std::size_t k = 0; k < 4; ++k) {
        const std::string pair = ket_label(k, 2);
        const std::string ket = std::string{pair[0]} + std::string(mid) + pair[1];
        s.amps[k] = joint[ket];
    }
    const double total = joint.norm();
    SwapOutcome out;
    out.swap_case = swap_case;
    out.route = outcome == Outcome::EG ? SwapRoute::QedEG : SwapRoute::QedGE;
    out.probability = total > 0.0 ? std::pow(s.norm() / total, 2) : 0.0;
    if (degenerate(out.probability)) {
        throw DegenerateMeasurementError("qed_collapse: outcome " + std::string(to_string(outcome)) +
                                         " has zero probability for case " +
                                         std::string(to_string(swap_case)));
    }
    out.state = s.normalized();
    out.concurrence = concurrence_pure(out.state);
    return out;
}

SwapOutcome evaluate_route(SwapCase sc, SwapRoute route, const DerivedParams& d, double t,
                           double tau) {
    const StageOneCoefficients c = stage1_coefficients(d, t);
    const PairVariant l = left_variant(sc);
    const PairVariant r = right_variant(sc);
    switch (route) {
    case SwapRoute::BsmB: return bsm_swap(l, r, BellChoice::B, c);
    case SwapRoute::BsmBPrime: return bsm_swap(l, r, BellChoice::BPrime, c);
    case SwapRoute::QedEG: return qed_collapse(qed_joint_state(l, r, c, d, tau), Outcome::EG, sc);
    case SwapRoute::QedGE: return qed_collapse(qed_joint_state(l, r, c, d, tau), Outcome::GE, sc);
    }
    throw InvalidParameterError("evaluate_route: unknown route");
}

} // namespace repeater
