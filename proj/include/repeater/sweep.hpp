#pragma once

#include "repeater/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace repeater::sweep {

/// Inclusive, evenly spaced grid. Requires steps >= 2 and start < stop.
struct Grid {
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;

    void validate() const;
    double at(int i) const;
    std::vector<double> values() const;
};

/// Parses "start:stop:steps".
Grid parse_grid(const std::string& text);

/// One curve family: a parameter set, plus the stage-one time for
/// tau sweeps.
struct Series {
    std::string name;
    ModelParams params;
    std::optional<double> fixed_gt;
};

struct Combo {
    SwapCase swap_case;
    SwapRoute route;
};

enum class Format { Csv, Json };

Format parse_format(const std::string& s);

/// Without tau_grid every row is a BSM evaluation at t from t_grid. With
/// tau_grid every row is evaluated at t = series.fixed_gt and tau from
/// tau_grid (QED routes only).
struct SweepSpec {
    std::vector<Series> series;
    Grid t_grid;
    std::optional<Grid> tau_grid;
    std::vector<Combo> combos;

    void validate() const;
};

struct Row {
    std::string series;
    double delta = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double gt = 0.0;
    std::optional<double> gtau;
    SwapCase swap_case = SwapCase::PsiPsi;
    SwapRoute route = SwapRoute::BsmB;
    /// Empty when the outcome has zero probability (state undefined).
    std::optional<double> concurrence;
    double success_probability = 0.0;
    double n = 1.0;
};

/// Cartesian product of cases and routes.
std::vector<Combo> combos_of(const std::vector<SwapCase>& cases,
                             const std::vector<SwapRoute>& routes);

/// Named figure datasets: fig2a fig2b fig3a fig3b fig4 fig4a fig4b fig4c
/// fig5 fig5a fig5b fig5c fig6 fig6a fig6b fig6c. Throws
/// InvalidParameterError for unknown names.
SweepSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// Rows ordered by series, then grid index, then combo; identical for any
/// thread count.
std::vector<Row> run(const SweepSpec& spec, unsigned threads = 1);

inline constexpr const char* kCsvHeader =
    "series,delta,kappa,gamma,gt,gtau,case,route,concurrence,success_probability,N";

void write_csv(std::ostream& os, const std::vector<Row>& rows);
void write_json(std::ostream& os, const std::vector<Row>& rows);

/// Shortest round-trip decimal form.
std::string format_double(double v);
/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

} // namespace repeater::sweep
