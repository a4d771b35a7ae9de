// Command-line driver for the dissipative repeater model.
//
//   repeater stage1 --delta 10 --kappa 20 --gamma 10 --gt 10
//   repeater bsm    --delta 10 --kappa 10 --gamma 10 --gt 7.85 --case psi_psi --bell b
//   repeater qed    --delta 10 --kappa 20 --gamma 10 --gt 10 --gtau 25 --case 1 --route qed_eg
//   repeater sweep  --preset fig2a --out fig2a.csv
//   repeater verify
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input.

#include "repeater/analytic.hpp"
#include "repeater/core.hpp"
#include "repeater/measures.hpp"
#include "repeater/sweep.hpp"
#include "repeater/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace repeater;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;

struct PhysicsFlags {
    double g = 1.0;
    double delta = 10.0;
    double kappa = 10.0;
    double gamma = 10.0;
};

void add_physics(CLI::App* cmd, PhysicsFlags& f) {
    cmd->add_option("--g", f.g, "coupling g (sets the unit)")->capture_default_str();
    cmd->add_option("--delta", f.delta, "detuning Delta in units of g")->capture_default_str();
    cmd->add_option("--kappa", f.kappa, "cavity decay rate in units of g")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "atomic emission rate in units of g")->capture_default_str();
}

ModelParams to_params(const PhysicsFlags& f) {
    return ModelParams::create(f.g, f.delta, f.kappa, f.gamma);
}

void warn_if_small_detuning(const ModelParams& p) {
    if (!large_detuning_check(p)) {
        std::cerr << "warning: |delta| < 10g, the effective Hamiltonian is outside its "
                     "large-detuning regime\n";
    }
}

ordered_json complex_json(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

std::string complex_text(Complex c) {
    std::ostringstream os;
    os << std::setprecision(12) << c.real() << (c.imag() < 0 ? " - " : " + ")
       << std::abs(c.imag()) << "i";
    return os.str();
}

ordered_json state_json(const TwoQubitPureState& s) {
    ordered_json amps;
    for (std::size_t k = 0; k < 4; ++k) amps[ket_label(k, 2)] = complex_json(s.amps[k]);
    return {{"atoms", s.labels}, {"amplitudes", amps}};
}

void print_state(std::ostream& os, const TwoQubitPureState& s) {
    os << "  state (" << s.labels[0] << "," << s.labels[1] << "):";
    for (std::size_t k = 0; k < 4; ++k) {
        if (std::abs(s.amps[k]) == 0.0) continue;
        os << "  [" << ket_label(k, 2) << "] " << complex_text(s.amps[k]);
    }
    os << '\n';
}

ordered_json outcome_json(const SwapOutcome& o) {
    return {{"case", to_string(o.swap_case)},
            {"route", to_string(o.route)},
            {"probability", o.probability},
            {"concurrence", o.concurrence},
            {"state", state_json(o.state)}};
}

void print_outcome(std::ostream& os, const SwapOutcome& o) {
    os << std::setprecision(12) << to_string(o.swap_case) << " " << to_string(o.route)
       << ": probability = " << o.probability << ", concurrence = " << o.concurrence << '\n';
    print_state(os, o.state);
}

void print_degenerate(std::ostream& os, SwapCase c, SwapRoute r, const std::string& why) {
    os << to_string(c) << " " << to_string(r) << ": degenerate (" << why << ")\n";
}

int cmd_stage1(const PhysicsFlags& f, double gt, bool json) {
    const ModelParams p = to_params(f);
    const DerivedParams d = derive_params(p);
    warn_if_small_detuning(p);
    const StageOneCoefficients c = stage1_coefficients(d, gt);

    if (json) {
        ordered_json j;
        j["gt"] = gt;
        j["delta_complex"] = complex_json(d.delta);
        j["lambda"] = complex_json(d.lambda);
        for (int i = 1; i <= 6; ++i) j["L" + std::to_string(i)] = complex_json(c.L(i));
        j["N"] = c.n;
        j["pairs"] = ordered_json::array();
        for (Outcome o : {Outcome::EG, Outcome::GE}) {
            ordered_json e{{"measured_23", to_string(o)}};
            try {
                const PairCollapse pc = collapse_pair(c, o, {1, 4});
                e["probability"] = pc.probability;
                e["concurrence"] = concurrence_pure(pc.state);
                e["state"] = state_json(pc.state);
            } catch (const DegenerateMeasurementError&) {
                e["probability"] = 0.0;
                e["state"] = nullptr;
            }
            j["pairs"].push_back(e);
        }
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << std::setprecision(12);
    std::cout << "gt = " << gt << '\n';
    std::cout << "delta = " << complex_text(d.delta) << '\n';
    std::cout << "lambda = " << complex_text(d.lambda) << '\n';
    for (int i = 1; i <= 6; ++i) std::cout << "L" << i << " = " << complex_text(c.L(i)) << '\n';
    std::cout << "N = " << c.n << '\n';
    for (Outcome o : {Outcome::EG, Outcome::GE}) {
        std::cout << "measure (2,3) = " << to_string(o) << ": ";
        try {
            const PairCollapse pc = collapse_pair(c, o, {1, 4});
            std::cout << "probability = " << pc.probability
                      << ", concurrence = " << concurrence_pure(pc.state) << '\n';
            print_state(std::cout, pc.state);
        } catch (const DegenerateMeasurementError&) {
            std::cout << "probability = 0 (no heralded pair)\n";
        }
    }
    return kExitOk;
}

int cmd_eval(const PhysicsFlags& f, double gt, std::optional<double> gtau,
             const std::vector<std::string>& cases, const std::vector<SwapRoute>& routes,
             bool json) {
    const ModelParams p = to_params(f);
    const DerivedParams d = derive_params(p);
    warn_if_small_detuning(p);
    std::vector<SwapCase> parsed;
    for (const auto& c : cases) parsed.push_back(parse_case(c));
    if (parsed.empty()) parsed.assign(kAllCases.begin(), kAllCases.end());

    ordered_json arr = ordered_json::array();
    for (SwapCase c : parsed) {
        for (SwapRoute r : routes) {
            try {
                const SwapOutcome o = evaluate_route(c, r, d, gt, gtau.value_or(gt));
                if (json) {
                    arr.push_back(outcome_json(o));
                } else {
                    print_outcome(std::cout, o);
                }
            } catch (const DegenerateMeasurementError& e) {
                if (json) {
                    arr.push_back({{"case", to_string(c)},
                                   {"route", to_string(r)},
                                   {"probability", 0.0},
                                   {"concurrence", nullptr},
                                   {"state", nullptr}});
                } else {
                    print_degenerate(std::cout, c, r, e.what());
                }
            }
        }
    }
    if (json) std::cout << arr.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& preset_name, const PhysicsFlags& f, bool physics_given,
              const std::optional<std::string>& t_grid, const std::optional<std::string>& tau_grid,
              std::optional<double> gt, const std::vector<std::string>& cases,
              const std::vector<std::string>& routes, const std::string& out,
              const std::string& format, unsigned threads) {
    sweep::SweepSpec spec;
    if (!preset_name.empty()) {
        spec = sweep::preset(preset_name);
        if (t_grid) spec.t_grid = sweep::parse_grid(*t_grid);
        if (tau_grid && spec.tau_grid) spec.tau_grid = sweep::parse_grid(*tau_grid);
        if (physics_given) {
            std::cerr << "warning: physics flags are ignored when a preset is given\n";
        }
    } else {
        const ModelParams p = to_params(f);
        warn_if_small_detuning(p);
        spec.series.push_back({"custom", p, gt});
        spec.t_grid = t_grid ? sweep::parse_grid(*t_grid) : sweep::Grid{0.0, 100.0, 2001};
        if (tau_grid) spec.tau_grid = sweep::parse_grid(*tau_grid);
        std::vector<SwapCase> cs;
        for (const auto& c : cases) cs.push_back(parse_case(c));
        if (cs.empty()) cs.assign(kAllCases.begin(), kAllCases.end());
        std::vector<SwapRoute> rs;
        for (const auto& r : routes) rs.push_back(parse_route(r));
        if (rs.empty()) {
            rs = tau_grid ? std::vector{SwapRoute::QedEG, SwapRoute::QedGE}
                          : std::vector{SwapRoute::BsmB, SwapRoute::BsmBPrime};
        }
        spec.combos = sweep::combos_of(cs, rs);
    }
    const sweep::Format fmt = sweep::parse_format(format);
    const std::vector<sweep::Row> rows = sweep::run(spec, threads);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out != "-") {
        file.open(out, std::ios::binary);
        if (!file) throw InvalidParameterError("cannot write output file '" + out + "'");
        os = &file;
    }
    if (fmt == sweep::Format::Csv) {
        sweep::write_csv(*os, rows);
    } else {
        sweep::write_json(*os, rows);
    }
    os->flush();
    if (!*os) throw InvalidParameterError("failed writing output '" + out + "'");
    if (out != "-") std::cerr << "wrote " << rows.size() << " rows to " << out << '\n';
    return kExitOk;
}

int cmd_verify(int random_states) {
    verify::Options opts = verify::default_options();
    opts.random_states = random_states;
    const verify::Report report = verify::run(opts);
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << report.to_json() << '\n';
    return report.passed() ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative quantum repeater: stage-one entanglement, Bell-measurement and "
                 "cavity-QED swapping"};
    app.require_subcommand(1);

    PhysicsFlags physics;
    double gt = 0.0;
    std::optional<double> gtau;
    std::vector<std::string> cases;
    std::vector<std::string> bells;
    std::vector<std::string> routes;
    std::string format = "text";
    std::string sweep_format = "csv";
    std::string out = "-";
    std::string preset_name;
    std::optional<std::string> t_grid;
    std::optional<std::string> tau_grid;
    std::optional<double> fixed_gt;
    unsigned threads = 1;
    int random_states = 1000;

    auto* stage1 = app.add_subcommand("stage1", "stage-one coefficients, N(t) and heralded pairs");
    add_physics(stage1, physics);
    stage1->add_option("--gt", gt, "interaction time gt")->required();
    stage1->add_option("--format", format, "text or json")->capture_default_str();

    auto* bsm = app.add_subcommand("bsm", "Bell-measurement swapping onto atoms (1,8)");
    add_physics(bsm, physics);
    bsm->add_option("--gt", gt, "stage-one time gt")->required();
    bsm->add_option("--case", cases, "psi_psi, psi_psiprime, psiprime_psi, psiprime_psiprime or 1..4");
    bsm->add_option("--bell", bells, "b or bprime (default both)");
    bsm->add_option("--format", format, "text or json")->capture_default_str();

    auto* qed = app.add_subcommand("qed", "cavity-QED swapping onto atoms (1,8)");
    add_physics(qed, physics);
    qed->add_option("--gt", gt, "stage-one time gt")->required();
    qed->add_option("--gtau", gtau, "interaction end time gtau (>= gt)")->required();
    qed->add_option("--case", cases, "psi_psi, psi_psiprime, psiprime_psi, psiprime_psiprime or 1..4");
    qed->add_option("--route", routes, "qed_eg or qed_ge (default both)");
    qed->add_option("--format", format, "text or json")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "parameter sweeps and figure datasets");
    add_physics(sw, physics);
    sw->add_option("--preset", preset_name, "fig2a fig2b fig3a fig3b fig4[a-c] fig5[a-c] fig6[a-c]");
    sw->add_option("--t-grid", t_grid, "gt grid start:stop:steps");
    sw->add_option("--tau-grid", tau_grid, "gtau grid start:stop:steps (QED routes)");
    sw->add_option("--gt", fixed_gt, "fixed stage-one time for gtau sweeps");
    sw->add_option("--case", cases, "case tags (default all four)");
    sw->add_option("--route", routes, "bsm_b bsm_bprime qed_eg qed_ge");
    sw->add_option("--out", out, "output path, - for stdout")->capture_default_str();
    sw->add_option("--threads", threads, "worker threads")->capture_default_str();
    sw->add_option("--format", sweep_format, "csv or json")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run analytic-vs-oracle cross-checks");
    ver->add_option("--random-states", random_states, "random pure states for the Wootters check")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (format != "text" && format != "json") {
        std::cerr << "error: --format must be text or json\n";
        return kExitInvalid;
    }

    try {
        if (stage1->parsed()) {
            return cmd_stage1(physics, gt, format == "json");
        }
        if (bsm->parsed()) {
            std::vector<SwapRoute> rs;
            for (const auto& b : bells) {
                rs.push_back(parse_bell(b) == BellChoice::B ? SwapRoute::BsmB : SwapRoute::BsmBPrime);
            }
            if (rs.empty()) rs = {SwapRoute::BsmB, SwapRoute::BsmBPrime};
            return cmd_eval(physics, gt, std::nullopt, cases, rs, format == "json");
        }
        if (qed->parsed()) {
            std::vector<SwapRoute> rs;
            for (const auto& r : routes) {
                const SwapRoute parsed = parse_route(r);
                if (parsed != SwapRoute::QedEG && parsed != SwapRoute::QedGE) {
                    throw InvalidParameterError("qed takes --route qed_eg or qed_ge");
                }
                rs.push_back(parsed);
            }
            if (rs.empty()) rs = {SwapRoute::QedEG, SwapRoute::QedGE};
            return cmd_eval(physics, gt, gtau, cases, rs, format == "json");
        }
        if (sw->parsed()) {
            const bool physics_given = sw->count("--g") + sw->count("--delta") +
                                           sw->count("--kappa") + sw->count("--gamma") > 0;
            if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
            return cmd_sweep(preset_name, physics, physics_given, t_grid, tau_grid, fixed_gt, cases,
                             routes, out, sweep_format, threads);
        }
        if (ver->parsed()) {
            if (random_states < 0) throw InvalidParameterError("--random-states must be >= 0");
            return cmd_verify(random_states);
        }
    } catch (const RepeaterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
