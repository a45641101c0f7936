// config.hpp: run configuration for the dsc command-line tool.
//
// Flat key = value lines grouped under [section] headers; '#' starts a
// comment. Sections: model, environment, run, truncation, sweep, outputs.
// Values keep the lab units of their key suffix (_ghz is omega/2pi in GHz,
// _mhz is kappa/2pi in MHz, _ohm, _nH, _fF); resolve() converts to the
// internal scale where omega_r = 1.
//
// The environment takes exactly one parameterization:
//   fixed cutoff    kappa_mhz + omega_cutoff_ghz
//   circuit family  kappa_mhz + Z_R_ohm + Z_T_ohm        (element solved from kappa)
//   circuit         Z_R_ohm + Z_T_ohm + L_c_nH | C_c_fF

#pragma once

#include "dsc/cvs.hpp"
#include "dsc/diag.hpp"
#include "dsc/environment.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsc::cli {

enum class Backend { cvs, diag, both };
enum class EnvParam { fixed_cutoff, circuit_family, circuit };
enum class SweepVar { none, kappa, g, l_c, c_c };
enum class Scale { linear, log };
enum class FractionBasis { exact, approximate };

std::string_view to_string(Backend b) noexcept;
std::string_view to_string(EnvParam e) noexcept;
std::string_view to_string(SweepVar v) noexcept;
std::string_view to_string(Scale s) noexcept;
std::string_view to_string(FractionBasis f) noexcept;
Backend parse_backend(std::string_view text);  // throws ConfigError

struct RunConfig {
    // [model]
    double omega_r_ghz{6.0};
    double delta_ghz{1.2};
    double g_ghz{6.0};
    Coupling qr_coupling{Coupling::inductive};

    // [environment]
    Coupling rw_coupling{Coupling::inductive};
    EnvParam env_param{EnvParam::fixed_cutoff};
    double kappa_mhz{0.0};
    double omega_cutoff_ghz{0.0};
    double z_r_ohm{0.0};
    double z_t_ohm{0.0};
    double l_c_nh{0.0};
    double c_c_ff{0.0};
    std::vector<double> mode_frequencies_ghz{5.0, 10.0, 15.0, 20.0};
    double mode_spacing_ghz{0.0};  // 0: spacing of the frequency grid
    FMode f_mode{FMode::continuum_closed_form};

    // [run]
    Backend backend{Backend::cvs};
    FractionBasis fraction_basis{FractionBasis::exact};
    std::size_t cvs_resonator_dim{0};  // 0: automatic from |alpha|
    bool timing{false};

    // [truncation]
    std::size_t resonator_dim{14};
    std::vector<std::size_t> mode_dims{3, 3, 3, 3};

    // [sweep]
    SweepVar sweep_variable{SweepVar::none};
    double sweep_start{0.0};
    double sweep_stop{0.0};
    std::size_t sweep_points{1};
    Scale sweep_scale{Scale::linear};

    // [outputs]
    std::vector<std::string> observables;  // empty: every column

    bool operator==(const RunConfig&) const = default;
};

// Observable CSV columns in canonical order.
const std::vector<std::string>& observable_columns();

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize(const RunConfig& c);

// Sweep values in lab units; empty without a sweep.
std::vector<double> sweep_values(const RunConfig& c);

// The config with the sweep variable pinned to `value`.
RunConfig at_sweep_value(const RunConfig& c, double value);

struct Resolved {
    UnitSystem units;
    ModelParams model;        // resonator_dim from [truncation]
    EnvSpectrum env;          // discretized modes attached
    TruncationSpec trunc;
    double kappa_mhz{0.0};    // derived for the circuit parameterization
};

// Convert lab units to the internal scale and attach the discrete modes.
Resolved resolve(const RunConfig& c);

} // namespace dsc::cli
