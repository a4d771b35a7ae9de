#include "repeater/analytic.hpp"
#include "repeater/sweep.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace repeater;
using namespace repeater::sweep;

namespace {
std::vector<Row> of_series(const std::vector<Row>& rows, const std::string& name, SwapCase c,
                           SwapRoute r) {
    std::vector<Row> out;
    for (const auto& row : rows) {
        if (row.series == name && row.swap_case == c && row.route == r) out.push_back(row);
    }
    return out;
}
} // namespace

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0:10:11");
    CHECK(g.start == 0.0);
    CHECK(g.stop == 10.0);
    CHECK(g.steps == 11);
    CHECK(g.at(3) == doctest::Approx(3.0));
    CHECK(g.values().back() == 10.0);
    CHECK_THROWS_AS(parse_grid("0:10"), InvalidParameterError);
    CHECK_THROWS_AS(parse_grid("0:10:1"), InvalidParameterError);
    CHECK_THROWS_AS(parse_grid("5:1:10"), InvalidParameterError);
    CHECK_THROWS_AS(parse_grid("a:1:10"), InvalidParameterError);
    CHECK_THROWS_AS(parse_grid("0:1:10x"), InvalidParameterError);
}

TEST_CASE("every preset name resolves") {
    for (const auto& n : preset_names()) {
        const auto s = preset(n);
        CHECK_NOTHROW(s.validate());
        CHECK_FALSE(s.series.empty());
    }
    CHECK_THROWS_AS(preset("fig9z"), InvalidParameterError);
    CHECK_THROWS_AS(preset("fig4d"), InvalidParameterError);
    CHECK(preset("fig5").combos.size() == 8);
    CHECK(preset("fig5a").combos.size() == 2);
    CHECK(preset("fig6c").series[0].fixed_gt == 3.0);
}

TEST_CASE("spec validation") {
    auto s = preset("fig2a");
    s.tau_grid = Grid{10, 20, 5};
    CHECK_THROWS_AS(s.validate(), InvalidParameterError);
    auto q = preset("fig4a");
    q.tau_grid = Grid{5, 20, 5};
    CHECK_THROWS_AS(q.validate(), InvalidParameterError);
    auto b = preset("fig2a");
    b.combos = {{SwapCase::PsiPsi, SwapRoute::QedEG}};
    CHECK_THROWS_AS(b.validate(), InvalidParameterError);
}

TEST_CASE("row invariants") {
    for (const auto& n : {"fig2a", "fig3b", "fig5"}) {
        auto s = preset(n);
        if (s.tau_grid) s.tau_grid->steps = 201; else s.t_grid.steps = 201;
        for (const auto& r : run(s, 2)) {
            if (r.concurrence) {
                CHECK(*r.concurrence >= 0.0);
                CHECK(*r.concurrence <= 1.0 + 1e-12);
            }
            CHECK(r.success_probability >= 0.0);
            if (r.route == SwapRoute::BsmB || r.route == SwapRoute::BsmBPrime) {
                const auto bell = r.route == SwapRoute::BsmB ? BellChoice::B : BellChoice::BPrime;
                CHECK(r.success_probability <= (bsm_yields_bell(r.swap_case, bell) ? 0.25 : 0.5) + 1e-12);
            }
        }
    }
}

TEST_CASE("fig3a: kappa = Gamma success probability peaks at 0.25") {
    const auto rows = run(preset("fig3a"), 4);
    const auto c = of_series(rows, "kappa_eq_gamma", SwapCase::PsiPsi, SwapRoute::BsmB);
    double best = 0.0;
    for (const auto& r : c) best = std::max(best, r.success_probability);
    CHECK(best == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("fig2a: dissipative concurrence saturates") {
    const auto rows = run(preset("fig2a"), 4);
    const auto c = of_series(rows, "kappa20_gamma10", SwapCase::PsiPsi, SwapRoute::BsmBPrime);
    REQUIRE(c.size() == 2001);
    for (const auto& r : c) {
        if (r.gt >= 80.0) {
            REQUIRE(r.concurrence);
            CHECK(*r.concurrence > 1.0 - 1e-3);
        }
    }
    // the kappa == Gamma branch keeps oscillating down to zero
    const auto k = of_series(rows, "kappa_eq_gamma", SwapCase::PsiPsi, SwapRoute::BsmBPrime);
    double lowest = 1.0;
    for (const auto& r : k) {
        if (r.gt > 50 && r.concurrence) lowest = std::min(lowest, *r.concurrence);
    }
    CHECK(lowest < 0.05);
}

TEST_CASE("fig5: kappa = Gamma concurrence is periodic in tau") {
    auto s = preset("fig5a");
    const double period = std::numbers::pi / 0.1;
    s.tau_grid = Grid{10.0, 10.0 + period, 2};
    const auto rows = run(s, 1);
    const auto c = of_series(rows, "kappa_eq_gamma", SwapCase::PsiPsi, SwapRoute::QedEG);
    REQUIRE(c.size() == 2);
    REQUIRE(c[0].concurrence);
    CHECK(*c[0].concurrence == 0.0);
    s.tau_grid = Grid{13.0, 13.0 + period, 2};
    const auto d = of_series(run(s, 1), "kappa_eq_gamma", SwapCase::PsiPsi, SwapRoute::QedEG);
    REQUIRE(d[0].concurrence);
    REQUIRE(d[1].concurrence);
    CHECK(std::abs(*d[0].concurrence - *d[1].concurrence) < 1e-10);
}

TEST_CASE("run is independent of thread count") {
    auto s = preset("fig4");
    s.tau_grid->steps = 101;
    const auto a = run(s, 1);
    const auto b = run(s, 7);
    REQUIRE(a.size() == b.size());
    std::ostringstream x, y;
    write_csv(x, a);
    write_csv(y, b);
    CHECK(x.str() == y.str());
}

TEST_CASE("CSV output") {
    Row r;
    r.series = "a,\"b\"";
    r.delta = 10;
    r.kappa = 20;
    r.gamma = 10;
    r.gt = 0.5;
    r.concurrence.reset();
    r.success_probability = 0;
    r.n = 1;
    std::ostringstream os;
    write_csv(os, {r});
    const std::string expect = std::string(kCsvHeader) + "\r\n" +
                               "\"a,\"\"b\"\"\",10,20,10,0.5,,psi_psi,bsm_b,,0,1\r\n";
    CHECK(os.str() == expect);
    CHECK(format_double(0.1) == "0.1");
    CHECK(csv_field("plain") == "plain");
}

TEST_CASE("JSON mirrors CSV") {
    auto s = preset("fig6b");
    s.tau_grid->steps = 3;
    const auto rows = run(s);
    std::ostringstream os;
    write_json(os, rows);
    const auto j = nlohmann::json::parse(os.str());
    REQUIRE(j.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(j[i]["series"] == rows[i].series);
        CHECK(j[i]["gt"].get<double>() == rows[i].gt);
        CHECK(j[i]["gtau"].get<double>() == *rows[i].gtau);
        CHECK(j[i]["case"] == std::string(to_string(rows[i].swap_case)));
        CHECK(j[i]["route"] == std::string(to_string(rows[i].route)));
        CHECK(j[i]["N"].get<double>() == rows[i].n);
        if (rows[i].concurrence) {
            CHECK(j[i]["concurrence"].get<double>() == *rows[i].concurrence);
        } else {
            CHECK(j[i]["concurrence"].is_null());
        }
    }
}
