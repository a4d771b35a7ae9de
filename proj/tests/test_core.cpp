#include "repeater/core.hpp"

#include <doctest.h>

#include <cmath>

using namespace repeater;

namespace {
ModelParams mp(double delta, double kappa, double gamma) {
    return ModelParams::create(1.0, delta, kappa, gamma);
}
} // namespace

TEST_CASE("derive_params: real detuning when kappa == gamma") {
    const auto d = derive_params(mp(10, 10, 10));
    CHECK(d.delta.real() == 10.0);
    CHECK(d.delta.imag() == 0.0);
    CHECK(std::abs(d.lambda - Complex(0.1, 0.0)) < 1e-15);
}

TEST_CASE("derive_params: complex detuning") {
    const auto d = derive_params(mp(10, 20, 10));
    CHECK(std::abs(d.delta - Complex(10, 5)) < 1e-15);
    CHECK(std::abs(d.lambda - Complex(0.08, -0.04)) < 1e-15);
}

TEST_CASE("derive_params: singular detuning") {
    CHECK_THROWS_AS(derive_params(mp(0, 10, 10)), SingularDetuningError);
    CHECK_THROWS_AS(derive_params(mp(0, 0, 0)), SingularDetuningError);
    // Delta = 0 with kappa != gamma is fine
    CHECK_NOTHROW(derive_params(mp(0, 20, 10)));
}

TEST_CASE("lambda * delta == g^2") {
    for (double g : {0.5, 1.0, 2.0}) {
        for (double delta : {-7.0, 2.0, 30.0}) {
            for (auto [k, G] : {std::pair{10.0, 10.0}, {20.0, 10.0}, {10.0, 20.0}, {0.0, 0.0}}) {
                const auto d = derive_params(ModelParams::create(g, delta, k, G));
                CHECK(std::abs(d.lambda * d.delta - g * g) < 1e-14);
            }
        }
    }
}

TEST_CASE("Im lambda <= 0 when kappa > gamma and Delta > 0") {
    for (double delta : {0.5, 2.0, 10.0, 30.0}) {
        CHECK(derive_params(mp(delta, 20, 10)).lambda.imag() <= 0.0);
    }
}

TEST_CASE("derive_params is pure") {
    const auto p = mp(3.3, 17.0, 4.0);
    const auto a = derive_params(p);
    const auto b = derive_params(p);
    CHECK(a.lambda == b.lambda);
    CHECK(a.delta == b.delta);
}

TEST_CASE("large_detuning_check") {
    CHECK(large_detuning_check(mp(10, 10, 10), 10));
    CHECK_FALSE(large_detuning_check(mp(2, 10, 10), 10));
    CHECK(large_detuning_check(mp(10, 20, 10), 10));
    CHECK_FALSE(large_detuning_check(mp(10, 20, 10), 12));
}

TEST_CASE("ModelParams validation") {
    CHECK_THROWS_AS(ModelParams::create(0, 1, 1, 1), InvalidParameterError);
    CHECK_THROWS_AS(ModelParams::create(-1, 1, 1, 1), InvalidParameterError);
    CHECK_THROWS_AS(ModelParams::create(1, 1, -1, 1), InvalidParameterError);
    CHECK_THROWS_AS(ModelParams::create(1, 1, 1, -0.5), InvalidParameterError);
    CHECK_THROWS_AS(ModelParams::create(1, NAN, 1, 1), InvalidParameterError);
    CHECK_THROWS_AS(ModelParams::create(1, 1, INFINITY, 1), InvalidParameterError);
    const auto p = ModelParams::create(2, -3, 0, 4);
    CHECK(p.g() == 2);
    CHECK(p.detuning() == -3);
    CHECK(p.kappa() == 0);
    CHECK(p.gamma() == 4);
}

TEST_CASE("ket indexing") {
    static_assert(ket_index("egge") == 0b0110);
    static_assert(ket_index("ee") == 0);
    static_assert(ket_index("gg") == 3);
    CHECK(ket_label(6, 4) == "egge");
    CHECK(ket_label(1, 2) == "eg");
    CHECK_THROWS(ket_index("ex"));
    for (std::size_t i = 0; i < 16; ++i) CHECK(ket_index(ket_label(i, 4)) == i);
}

TEST_CASE("state normalization") {
    TwoQubitPureState s;
    s[TwoQubitKet::EG] = 3.0;
    s[TwoQubitKet::GE] = Complex(0, 4);
    CHECK(s.norm() == doctest::Approx(5.0));
    const auto n = s.normalized();
    CHECK(n.norm() == doctest::Approx(1.0));
    CHECK(std::abs(n[TwoQubitKet::GE] - Complex(0, 0.8)) < 1e-15);
    CHECK_THROWS_AS(TwoQubitPureState{}.normalized(), DegenerateMeasurementError);

    FourAtomState f;
    f["egge"] = 2.0;
    CHECK(f.normalized()["egge"] == Complex(1.0));
    CHECK_THROWS_AS(FourAtomState{}.normalized(), DegenerateMeasurementError);
}

TEST_CASE("case helpers") {
    for (SwapCase c : kAllCases) {
        CHECK(make_case(left_variant(c), right_variant(c)) == c);
        CHECK(parse_case(to_string(c)) == c);
    }
    CHECK(left_variant(SwapCase::PsiPrimePsi) == PairVariant::PsiPrime);
    CHECK(right_variant(SwapCase::PsiPrimePsi) == PairVariant::Psi);
    CHECK(parse_case("1") == SwapCase::PsiPsi);
    CHECK(parse_case("4") == SwapCase::PsiPrimePsiPrime);
    for (SwapRoute r : kAllRoutes) CHECK(parse_route(to_string(r)) == r);
    CHECK(parse_bell("bprime") == BellChoice::BPrime);
    CHECK(parse_outcome("ge") == Outcome::GE);
    CHECK_THROWS_AS(parse_case("5"), InvalidParameterError);
    CHECK_THROWS_AS(parse_route("bsm"), InvalidParameterError);
}
