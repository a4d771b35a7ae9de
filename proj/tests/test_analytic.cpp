#include "repeater/analytic.hpp"
#include "repeater/measures.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace repeater;
using K = TwoQubitKet;
using std::numbers::pi;

namespace {
DerivedParams dp(double delta, double kappa, double gamma) {
    return derive_params(ModelParams::create(1.0, delta, kappa, gamma));
}

// printed sin/cos form of the six coefficients
std::array<Complex, 6> printed(const DerivedParams& d, double t) {
    const Complex lt = d.lambda * t;
    const Complex ph = std::exp(-kI * lt);
    const Complex l1 = -kI * ph / 2.0 * std::sin(lt);
    const Complex l2 = ph / 2.0 * std::cos(lt);
    return {l1, l2, Complex(-0.5), -std::exp(-2.0 * kI * lt) / 2.0, l2, l1};
}

double conc2(Complex a, Complex b) {
    return 2.0 * std::abs(std::conj(a) * b) / (std::norm(a) + std::norm(b));
}

const std::array<DerivedParams, 4> kParams{dp(10, 10, 10), dp(10, 20, 10), dp(30, 20, 10),
                                           dp(2, 10, 20)};
const std::array<double, 5> kTimes{0.4, 3.0, 7.9, 10.0, 23.0};
} // namespace

TEST_CASE("stage-one coefficients at t = 0") {
    const auto c = stage1_coefficients(dp(10, 20, 10), 0.0);
    CHECK(c.L(1) == Complex(0.0));
    CHECK(c.L(6) == Complex(0.0));
    CHECK(c.L(2) == Complex(0.5));
    CHECK(c.L(5) == Complex(0.5));
    CHECK(c.L(3) == Complex(-0.5));
    CHECK(c.L(4) == Complex(-0.5));
    CHECK(c.n == 1.0);
    CHECK_THROWS_AS(stage1_coefficients(dp(10, 20, 10), -1.0), InvalidParameterError);
}

TEST_CASE("stage-one coefficients at lambda t = 1, kappa = Gamma") {
    const auto c = stage1_coefficients(dp(10, 10, 10), 10.0);
    CHECK(std::abs(c.L(1)) == doctest::Approx(std::sin(1.0) / 2).epsilon(1e-14));
    CHECK(std::abs(c.L(5)) == doctest::Approx(std::cos(1.0) / 2).epsilon(1e-14));
    CHECK(std::abs(c.L(1)) == doctest::Approx(0.42074).epsilon(1e-5));
    CHECK(std::abs(c.L(5)) == doctest::Approx(0.27015).epsilon(1e-5));
    CHECK(c.n == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stage-one coefficients match the sin/cos form") {
    for (const auto& d : kParams) {
        for (double t : kTimes) {
            const auto c = stage1_coefficients(d, t);
            const auto p = printed(d, t);
            for (int i = 0; i < 6; ++i) CHECK(std::abs(c.l[i] - p[i]) < 1e-12);
        }
    }
}

TEST_CASE("dissipation changes the norm") {
    const auto c = stage1_coefficients(dp(10, 20, 10), 10.0);
    CHECK(std::abs(c.n - 1.0) > 1e-3);
}

TEST_CASE("stage-one state") {
    const auto d = dp(10, 10, 10);
    const auto s0 = stage1_state(d, 0.0, {1, 2, 3, 4});
    CHECK(s0["egeg"] == Complex(0.5));
    CHECK(s0["egge"] == Complex(-0.5));
    CHECK(s0["geeg"] == Complex(-0.5));
    CHECK(s0["gege"] == Complex(0.5));
    CHECK(s0.norm() == 1.0);

    for (const auto& dd : kParams) {
        for (double t : kTimes) CHECK(stage1_state(dd, t, {5, 6, 7, 8}).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto s = stage1_state(d, pi / 4 / d.lambda.real(), {1, 2, 3, 4});
    CHECK(std::abs(s["eegg"]) == doctest::Approx(std::abs(s["egeg"])).epsilon(1e-12));
    CHECK_THROWS(stage1_state(d, 1.0, {1, 2, 3, 5}));
}

TEST_CASE("collapse_pair") {
    const auto d = dp(10, 10, 10);
    const auto c0 = stage1_coefficients(d, 0.0);
    auto r = collapse_pair(c0, Outcome::EG, {1, 4});
    CHECK(r.probability == doctest::Approx(0.25));
    CHECK(std::abs(r.state[K::GE]) == doctest::Approx(1.0));
    r = collapse_pair(c0, Outcome::GE, {5, 8});
    CHECK(r.probability == doctest::Approx(0.25));
    CHECK(std::abs(r.state[K::EG]) == doctest::Approx(1.0));
    CHECK(r.state.labels == std::array<int, 2>{5, 8});

    const auto c1 = stage1_coefficients(d, 10.0);
    r = collapse_pair(c1, Outcome::EG, {1, 4});
    CHECK(concurrence_pure(r.state) == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
    CHECK_THROWS(collapse_pair(c1, Outcome::EG, {1, 8}));
}

TEST_CASE("heralding probability is a quarter for every outcome") {
    for (const auto& d : kParams) {
        for (double t : kTimes) {
            const auto c = stage1_coefficients(d, t);
            CHECK(collapse_pair(c, Outcome::EG, {1, 4}).probability == doctest::Approx(0.25).epsilon(1e-12));
            CHECK(collapse_pair(c, Outcome::GE, {1, 4}).probability == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("pair amplitudes") {
    const auto c = stage1_coefficients(dp(10, 20, 10), 3.0);
    CHECK(pair_amplitudes(c, PairVariant::Psi) == std::pair{c.L(1), c.L(5)});
    CHECK(pair_amplitudes(c, PairVariant::PsiPrime) == std::pair{c.L(2), c.L(6)});
}

TEST_CASE("BSM with B on (Psi, Psi) at lambda t = pi/4") {
    const auto d = dp(10, 10, 10);
    const auto c = stage1_coefficients(d, pi / 4 / d.lambda.real());
    const auto out = bsm_swap(PairVariant::Psi, PairVariant::Psi, BellChoice::B, c);
    CHECK(out.probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(out.concurrence == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out.state[K::EE]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(out.state[K::GG]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(out.state.labels == std::array<int, 2>{1, 8});
}

TEST_CASE("BSM with B on (Psi, Psi) at t = 0 is degenerate") {
    const auto c = stage1_coefficients(dp(10, 10, 10), 0.0);
    CHECK(bsm_probability(SwapCase::PsiPsi, BellChoice::B, c) == 0.0);
    CHECK_THROWS_AS(bsm_swap(PairVariant::Psi, PairVariant::Psi, BellChoice::B, c),
                    DegenerateMeasurementError);
}

TEST_CASE("BSM gamma-state concurrence at lambda t = 1") {
    const auto c = stage1_coefficients(dp(10, 10, 10), 10.0);
    const double s = std::sin(1.0), k = std::cos(1.0);
    const double c1 = 2 * s * s * k * k / (std::pow(s, 4) + std::pow(k, 4));
    CHECK(c1 == doctest::Approx(0.704771).epsilon(1e-6));
    CHECK(bsm_swap(PairVariant::Psi, PairVariant::Psi, BellChoice::BPrime, c).concurrence ==
          doctest::Approx(c1).epsilon(1e-12));
    CHECK(bsm_swap(PairVariant::Psi, PairVariant::PsiPrime, BellChoice::B, c).concurrence ==
          doctest::Approx(c1).epsilon(1e-12));
}

TEST_CASE("BSM closed forms against printed expressions") {
    for (const auto& d : kParams) {
        for (double t : kTimes) {
            const auto c = stage1_coefficients(d, t);
            const auto p = printed(d, t);
            const double den = std::pow(std::norm(p[0]) + std::norm(p[4]), 2);
            const double sb = std::norm(p[0] * p[4]) / den;
            const double sbp = (std::norm(p[0] * p[1]) + std::norm(p[4] * p[5])) / (2 * den);
            const double spb = std::norm(p[1] * p[5]) / den;
            CHECK(bsm_probability(SwapCase::PsiPsi, BellChoice::B, c) == doctest::Approx(sb).epsilon(1e-12));
            CHECK(bsm_probability(SwapCase::PsiPsiPrime, BellChoice::BPrime, c) == doctest::Approx(sbp).epsilon(1e-12));
            CHECK(bsm_probability(SwapCase::PsiPrimePsiPrime, BellChoice::B, c) == doctest::Approx(spb).epsilon(1e-12));
            CHECK(sb <= 0.25 + 1e-15);

            const double c1 = 2 * std::norm(p[0]) * std::norm(p[4]) /
                              (std::pow(std::norm(p[0]), 2) + std::pow(std::norm(p[4]), 2));
            CHECK(bsm_swap(PairVariant::Psi, PairVariant::Psi, BellChoice::BPrime, c).concurrence ==
                  doctest::Approx(c1).epsilon(1e-12));
        }
    }
}

TEST_CASE("bsm_yields_bell") {
    CHECK(bsm_yields_bell(SwapCase::PsiPsi, BellChoice::B));
    CHECK(bsm_yields_bell(SwapCase::PsiPsiPrime, BellChoice::BPrime));
    CHECK(bsm_yields_bell(SwapCase::PsiPrimePsi, BellChoice::BPrime));
    CHECK(bsm_yields_bell(SwapCase::PsiPrimePsiPrime, BellChoice::B));
    CHECK_FALSE(bsm_yields_bell(SwapCase::PsiPsi, BellChoice::BPrime));
    CHECK_FALSE(bsm_yields_bell(SwapCase::PsiPrimePsiPrime, BellChoice::BPrime));
}

TEST_CASE("QED joint state at tau = t") {
    const auto d = dp(10, 20, 10);
    const auto c = stage1_coefficients(d, 3.0);
    const auto j = qed_joint_state(PairVariant::Psi, PairVariant::Psi, c, d, 3.0);
    const double nn = std::norm(c.L(1)) + std::norm(c.L(5));
    CHECK(std::abs(j["eegg"]) < 1e-15);
    CHECK(std::abs(j["ggee"]) < 1e-15);
    CHECK(std::abs(j["egeg"] - c.L(1) * c.L(1) / nn) < 1e-14);
    CHECK(std::abs(j["gege"] - c.L(5) * c.L(5) / nn) < 1e-14);
    CHECK(j.labels == std::array<int, 4>{1, 4, 5, 8});
    CHECK_THROWS_AS(qed_joint_state(PairVariant::Psi, PairVariant::Psi, c, d, 2.0), InvalidParameterError);
}

TEST_CASE("QED joint state when the phase is -1") {
    const auto d = dp(10, 10, 10);
    const double t = 4.0;
    const auto c = stage1_coefficients(d, t);
    const double tau = t + pi / (2 * d.lambda.real());
    const auto j = qed_joint_state(PairVariant::Psi, PairVariant::Psi, c, d, tau);
    CHECK(std::abs(j["egeg"]) < 1e-14);
    CHECK(std::abs(j["gege"]) < 1e-14);
    CHECK(std::abs(j["eegg"]) > 1e-3);
}

TEST_CASE("QED collapse at tau = t, (Psi, Psi), outcome eg") {
    for (const auto& d : kParams) {
        const auto c = stage1_coefficients(d, 3.0);
        const auto j = qed_joint_state(PairVariant::Psi, PairVariant::Psi, c, d, 3.0);
        const auto out = qed_collapse(j, Outcome::EG, SwapCase::PsiPsi);
        CHECK(out.concurrence == 0.0);
        CHECK(std::abs(out.state[K::GE]) == doctest::Approx(1.0));
        CHECK(out.route == SwapRoute::QedEG);
    }
}

TEST_CASE("QED concurrences against printed expressions") {
    for (const auto& d : kParams) {
        for (double t : {3.0, 10.0}) {
            for (double dt : {0.0, 1.3, 7.85, 20.0}) {
                const auto p = printed(d, t);
                const Complex u = std::exp(2.0 * kI * d.lambda * t) * std::exp(-2.0 * kI * d.lambda * (t + dt));
                const double c1p = conc2(p[0] * p[0] * (u - 1.0) / 2.0, p[4] * p[4] * (u + 1.0) / 2.0);
                const double c1pp = conc2(p[0] * p[0] * (u + 1.0) / 2.0, p[4] * p[4] * (u - 1.0) / 2.0);
                const double c2p = conc2(p[0] * p[1] * (u - 1.0) / 2.0, p[4] * p[5] * (u + 1.0) / 2.0);
                auto conc = [&](SwapCase sc, SwapRoute r) {
                    return evaluate_route(sc, r, d, t, t + dt).concurrence;
                };
                if (dt > 0) {
                    CHECK(conc(SwapCase::PsiPsi, SwapRoute::QedEG) == doctest::Approx(c1p).epsilon(1e-12));
                    CHECK(conc(SwapCase::PsiPrimePsiPrime, SwapRoute::QedGE) == doctest::Approx(c1p).epsilon(1e-12));
                    CHECK(conc(SwapCase::PsiPsiPrime, SwapRoute::QedEG) == doctest::Approx(c2p).epsilon(1e-12));
                    CHECK(conc(SwapCase::PsiPrimePsi, SwapRoute::QedGE) == doctest::Approx(c2p).epsilon(1e-12));
                }
                CHECK(conc(SwapCase::PsiPsi, SwapRoute::QedGE) == doctest::Approx(c1pp).epsilon(1e-12));
                CHECK(conc(SwapCase::PsiPrimePsiPrime, SwapRoute::QedEG) == doctest::Approx(c1pp).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("QED (Psi, Psi) at lambda t = lambda(tau - t) = pi/4") {
    const auto d = dp(10, 10, 10);
    const double t = pi / 4 / d.lambda.real();
    const auto out = evaluate_route(SwapCase::PsiPsi, SwapRoute::QedEG, d, t, 2 * t);
    const auto p = printed(d, t);
    const Complex u = std::exp(-2.0 * kI * d.lambda * t);
    CHECK(std::abs(std::abs(p[0]) - std::abs(p[4])) < 1e-15);
    CHECK(out.concurrence ==
          doctest::Approx(conc2(p[0] * p[0] * (u - 1.0) / 2.0, p[4] * p[4] * (u + 1.0) / 2.0)).epsilon(1e-12));
    CHECK(out.concurrence == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluate_route covers every combination") {
    const auto d = dp(10, 20, 10);
    for (SwapCase sc : kAllCases) {
        for (SwapRoute r : kAllRoutes) {
            const auto out = evaluate_route(sc, r, d, 5.0, 9.0);
            CHECK(out.swap_case == sc);
            CHECK(out.route == r);
            CHECK(out.concurrence >= 0.0);
            CHECK(out.concurrence <= 1.0 + 1e-12);
            CHECK(out.probability > 0.0);
            CHECK(out.state.norm() == doctest::Approx(1.0));
        }
    }
}
