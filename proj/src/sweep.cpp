#include "repeater/sweep.hpp"

#include "repeater/analytic.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace repeater::sweep {

void Grid::validate() const {
    if (steps < 2) throw InvalidParameterError("grid needs at least 2 steps");
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
        throw InvalidParameterError("grid start must be finite and below stop");
    }
}

double Grid::at(int i) const {
    if (i == steps - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::vector<double> Grid::values() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
}

Grid parse_grid(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ||
        a.empty() || b.empty() || c.empty()) {
        throw InvalidParameterError("grid must be written start:stop:steps, got '" + text + "'");
    }
    Grid g;
    try {
        std::size_t used = 0;
        g.start = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        g.stop = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        g.steps = std::stoi(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        throw InvalidParameterError("grid must be written start:stop:steps, got '" + text + "'");
    }
    g.validate();
    return g;
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw InvalidParameterError("unknown format '" + s + "' (expected csv or json)");
}

void SweepSpec::validate() const {
    if (series.empty()) throw InvalidParameterError("sweep needs at least one series");
    if (combos.empty()) throw InvalidParameterError("sweep needs at least one case/route");
    t_grid.validate();
    auto is_qed = [](const Combo& c) {
        return c.route == SwapRoute::QedEG || c.route == SwapRoute::QedGE;
    };
    const bool any_qed = std::any_of(combos.begin(), combos.end(), is_qed);
    if (tau_grid) {
        tau_grid->validate();
        if (!std::all_of(combos.begin(), combos.end(), is_qed)) {
            throw InvalidParameterError("a tau grid sweep takes QED routes only");
        }
        for (const Series& s : series) {
            if (!s.fixed_gt) throw InvalidParameterError("tau sweeps need a fixed gt per series");
            if (tau_grid->start < *s.fixed_gt) {
                throw InvalidParameterError("tau grid must start at or after gt");
            }
        }
    } else if (any_qed) {
        throw InvalidParameterError("QED routes need a tau grid (gtau) and a fixed gt");
    }
}

std::vector<Combo> combos_of(const std::vector<SwapCase>& cases,
                             const std::vector<SwapRoute>& routes) {
    std::vector<Combo> out;
    for (SwapCase c : cases) {
        for (SwapRoute r : routes) out.push_back({c, r});
    }
    return out;
}

namespace {

using C = SwapCase;
using R = SwapRoute;

const std::vector<Combo> kGammaCombos{
    {C::PsiPsi, R::BsmBPrime}, {C::PsiPsiPrime, R::BsmB},
    {C::PsiPrimePsi, R::BsmB}, {C::PsiPrimePsiPrime, R::BsmBPrime}};
const std::vector<Combo> kBellCombos{
    {C::PsiPsi, R::BsmB}, {C::PsiPsiPrime, R::BsmBPrime},
    {C::PsiPrimePsi, R::BsmBPrime}, {C::PsiPrimePsiPrime, R::BsmB}};
const std::vector<Combo> kQedA{{C::PsiPsi, R::QedEG}, {C::PsiPrimePsiPrime, R::QedGE}};
const std::vector<Combo> kQedB{{C::PsiPsi, R::QedGE}, {C::PsiPrimePsiPrime, R::QedEG}};
const std::vector<Combo> kQedC{{C::PsiPsiPrime, R::QedEG}, {C::PsiPsiPrime, R::QedGE},
                               {C::PsiPrimePsi, R::QedEG}, {C::PsiPrimePsi, R::QedGE}};

// Sampling density is not fixed by the figures; 2001 points per axis.
constexpr Grid kTimeAxis{0.0, 100.0, 2001};
constexpr Grid kTauAxis{10.0, 110.0, 2001};

ModelParams params(double delta, double kappa, double gamma) {
    return ModelParams::create(1.0, delta, kappa, gamma);
}

std::vector<Combo> concat(std::initializer_list<std::vector<Combo>> parts) {
    std::vector<Combo> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig4a", "fig4b", "fig4c",
            "fig5",  "fig5a", "fig5b", "fig5c", "fig6", "fig6a", "fig6b", "fig6c"};
}

SweepSpec preset(const std::string& name) {
    const std::vector<Series> dissipation{{"kappa_eq_gamma", params(10, 10, 10), std::nullopt},
                                          {"kappa20_gamma10", params(10, 20, 10), std::nullopt}};
    const std::vector<Series> detuning{{"delta10", params(10, 20, 10), std::nullopt},
                                       {"delta30", params(30, 20, 10), std::nullopt}};

    auto with_gt = [](std::vector<Series> s, double gt) {
        for (auto& x : s) x.fixed_gt = gt;
        return s;
    };
    const std::map<char, std::vector<Combo>> qed_panels{{'a', kQedA}, {'b', kQedB}, {'c', kQedC}};
    auto qed_combos = [&](const std::string& n) {
        if (n.size() == 4) return concat({kQedA, kQedB, kQedC});
        return qed_panels.at(n.back());
    };

    SweepSpec s;
    s.t_grid = kTimeAxis;
    if (name == "fig2a" || name == "fig3a") {
        s.series = dissipation;
        s.combos = name == "fig2a" ? kGammaCombos : kBellCombos;
    } else if (name == "fig2b" || name == "fig3b") {
        s.series = detuning;
        s.combos = name == "fig2b" ? kGammaCombos : kBellCombos;
    } else if (name.rfind("fig4", 0) == 0 || name.rfind("fig5", 0) == 0 ||
               name.rfind("fig6", 0) == 0) {
        const bool known = name.size() == 4 || (name.size() == 5 && qed_panels.count(name.back()));
        if (!known) throw InvalidParameterError("unknown preset '" + name + "'");
        s.tau_grid = kTauAxis;
        s.combos = qed_combos(name);
        if (name[3] == '4') {
            s.series = with_gt(detuning, 10.0);
        } else if (name[3] == '5') {
            s.series = with_gt(dissipation, 10.0);
        } else {
            s.series = {{"gt3", params(10, 20, 10), 3.0}, {"gt10", params(10, 20, 10), 10.0}};
        }
    } else {
        throw InvalidParameterError("unknown preset '" + name + "'");
    }
    return s;
}

namespace {

Row evaluate(const Series& series, const DerivedParams& d, double t, std::optional<double> tau,
             const Combo& combo) {
    Row row;
    row.series = series.name;
    row.delta = series.params.detuning();
    row.kappa = series.params.kappa();
    row.gamma = series.params.gamma();
    row.gt = t;
    row.gtau = tau;
    row.swap_case = combo.swap_case;
    row.route = combo.route;
    row.n = stage1_coefficients(d, t).n;
    try {
        const SwapOutcome out = evaluate_route(combo.swap_case, combo.route, d, t, tau.value_or(t));
        row.concurrence = out.concurrence;
        row.success_probability = out.probability;
    } catch (const DegenerateMeasurementError&) {
        row.concurrence.reset();
        row.success_probability = 0.0;
    }
    return row;
}

} // namespace

std::vector<Row> run(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    const Grid& axis = spec.tau_grid ? *spec.tau_grid : spec.t_grid;
    const std::size_t points = static_cast<std::size_t>(axis.steps);
    const std::size_t per_series = points * spec.combos.size();
    std::vector<Row> rows(spec.series.size() * per_series);

    std::vector<DerivedParams> derived;
    derived.reserve(spec.series.size());
    for (const Series& s : spec.series) derived.push_back(derive_params(s.params));

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t job = begin; job < end; ++job) {
            const std::size_t si = job / points;
            const int gi = static_cast<int>(job % points);
            const Series& s = spec.series[si];
            const double x = axis.at(gi);
            const double t = spec.tau_grid ? *s.fixed_gt : x;
            const std::optional<double> tau =
                spec.tau_grid ? std::optional<double>(x) : std::nullopt;
            for (std::size_t ci = 0; ci < spec.combos.size(); ++ci) {
                rows[si * per_series + static_cast<std::size_t>(gi) * spec.combos.size() + ci] =
                    evaluate(s, derived[si], t, tau, spec.combos[ci]);
            }
        }
    };

    const std::size_t jobs = spec.series.size() * points;
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, jobs);
    if (workers == 1) {
        work(0, jobs);
        return rows;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (jobs + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(jobs, begin + chunk);
        if (begin < end) pool.emplace_back(work, begin, end);
    }
    pool.clear();
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    os << kCsvHeader << "\r\n";
    for (const Row& r : rows) {
        os << csv_field(r.series) << ',' << format_double(r.delta) << ','
           << format_double(r.kappa) << ',' << format_double(r.gamma) << ','
           << format_double(r.gt) << ',' << (r.gtau ? format_double(*r.gtau) : "") << ','
           << to_string(r.swap_case) << ',' << to_string(r.route) << ','
           << (r.concurrence ? format_double(*r.concurrence) : "") << ','
           << format_double(r.success_probability) << ',' << format_double(r.n) << "\r\n";
    }
}

void write_json(std::ostream& os, const std::vector<Row>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
        nlohmann::ordered_json o;
        o["series"] = r.series;
        o["delta"] = r.delta;
        o["kappa"] = r.kappa;
        o["gamma"] = r.gamma;
        o["gt"] = r.gt;
        o["gtau"] = r.gtau ? nlohmann::ordered_json(*r.gtau) : nlohmann::ordered_json(nullptr);
        o["case"] = to_string(r.swap_case);
        o["route"] = to_string(r.route);
        o["concurrence"] =
            r.concurrence ? nlohmann::ordered_json(*r.concurrence) : nlohmann::ordered_json(nullptr);
        o["success_probability"] = r.success_probability;
        o["N"] = r.n;
        arr.push_back(std::move(o));
    }
    os << arr.dump(1) << '\n';
}

} // namespace repeater::sweep
