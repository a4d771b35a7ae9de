#pragma once

#include "repeater/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repeater::verify {

struct Options {
    std::vector<ModelParams> grid;
    std::vector<double> times;       ///< stage-one times gt
    std::vector<double> tau_offsets; ///< g(tau - t) for QED checks
    int random_states = 1000;
    std::uint64_t seed = 20180401;
    /// Full-vs-effective infidelity must stay below this where |delta| >=
    /// strict_detuning and kappa >= gamma. For kappa < gamma the interaction
    /// picture coupling carries exp(|Im delta| t) and the adiabatic
    /// elimination breaks down; those rows are reported only.
    double approximation_tolerance = 0.05;
    double strict_detuning = 30.0;
};

/// Delta in {2, 10, 30} x (kappa, Gamma) in {(10,10), (20,10), (10,20), (0,0)},
/// gt in {0, 0.5, 3, 10, 25, 50}, g(tau - t) in {0, 1.3, 7.5, 20}.
Options default_options();

struct Check {
    std::string name;
    bool passed = true;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::size_t evaluations = 0;
    std::string detail;
};

struct ApproximationRow {
    double delta = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double abs_delta = 0.0;
    double gt = 0.0;
    double max_infidelity = 0.0;
    double cutoff_discrepancy = 0.0;
    bool large_detuning = true;
    bool enforced = false;
};

struct Report {
    std::vector<Check> checks;
    std::vector<ApproximationRow> approximation;
    std::vector<std::string> warnings;

    bool passed() const;
    std::string to_json() const;
};

Report run(const Options& opts);

} // namespace repeater::verify
