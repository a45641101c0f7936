// runner.hpp: single-point and sweep execution, CSV output.

#pragma once

#include "config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsc::cli {

struct ResultRow {
    double g_ghz{0.0};
    double kappa_mhz{0.0};
    Backend backend{Backend::cvs};  // cvs or diag, never both
    std::optional<double> n_virtual, purity, coherence_C, energy, mp, theta_opt, phi_opt;
    std::optional<double> fraction_0plus, fraction_1minus, fraction_1plus, fraction_0minus;
    std::optional<int> solver_iterations;
    std::optional<double> wall_time_ms;
    std::string error;  // empty on success; "warning:" prefix does not count as failure

    bool failed() const { return !error.empty() && error.rfind("warning:", 0) != 0; }
};

// Everything one backend produces at one configuration; the resonator
// post-measurement machinery needs rho_qr, the CSV needs the row.
struct PointState {
    ResultRow row;
    std::optional<DensityMatrix> rho_qr;
    cplx alpha{0.0};
};

// One backend at the configuration's own parameter values.
PointState evaluate(const RunConfig& c, Backend which);

// One row per selected backend (cvs before diag).
std::vector<ResultRow> run_point(const RunConfig& c);

struct SweepOutput {
    std::string csv;
    std::size_t failures{0};
    std::size_t rows{0};
};

// Rows ordered by sweep index then backend; `jobs` bounds the worker pool.
SweepOutput run_sweep(const RunConfig& c, int jobs);

// CSV pieces, exposed for tests.
std::vector<std::string> csv_columns(const RunConfig& c);
std::string csv_preamble(const RunConfig& c, const std::string& title);
std::string format_row(const ResultRow& r, const std::vector<std::string>& columns);

} // namespace dsc::cli
