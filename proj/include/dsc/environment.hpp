// environment.hpp: waveguide coupling spectrum, loss rate, circuit-element
// mapping, mode discretization and the spin-boson spectral density.
//
// Angular frequencies are in the same unit as ModelParams::omega_r (internally
// omega_r = 1). SI quantities appear only in CircuitParams.

#pragma once

#include "dsc/rabi.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace dsc {

// Conversion between lab units and the internal scale where omega_r = 1.
struct UnitSystem {
    double omega_r_ghz{6.0};  // omega_r / 2pi

    double from_ghz(double f_ghz) const noexcept { return f_ghz / omega_r_ghz; }
    double to_ghz(double w) const noexcept { return w * omega_r_ghz; }
    double from_mhz(double f_mhz) const noexcept { return f_mhz / (1000.0 * omega_r_ghz); }
    double to_mhz(double w) const noexcept { return w * 1000.0 * omega_r_ghz; }
    // One internal frequency unit in rad/s.
    double rad_per_s() const noexcept;
    double from_rad_per_s(double w_si) const noexcept { return w_si / rad_per_s(); }
};

struct Mode {
    double omega{0.0};
    double xi{0.0};
    std::size_t dim{3};
};

struct EnvSpectrum {
    double xi0{0.0};
    double omega_cutoff{std::numeric_limits<double>::infinity()};
    Coupling rw_coupling{Coupling::inductive};
    std::vector<Mode> modes;
    double mode_spacing{0.0};

    void validate() const;  // throws DomainError
};

struct CircuitParams {
    double z_r_ohm{30.0};
    double z_t_ohm{50.0};
    double omega_r_rad_s{0.0};           // sets C_R when c_r_farad is absent
    std::optional<double> c_r_farad;
    std::optional<double> l_c_henry;     // inductive only
    std::optional<double> c_c_farad;     // capacitive only
    Coupling rw_coupling{Coupling::inductive};

    void validate() const;  // throws DomainError
    double resonator_capacitance() const;  // C_R, or 1/(Z_R omega_r)
    double series_capacitance() const;     // C'_c = C_c C_R / (C_c + C_R)
};

// kappa = 2 pi xi0^2 omega_r / (1 + (omega_r/omega_cutoff)^2); cutoff may be +inf.
double kappa(double xi0, double omega_cutoff, double omega_r);
double xi0_from_kappa(double kappa, double omega_cutoff, double omega_r);

// xi0 and cutoff of a circuit; the cutoff is returned divided by unit_rad_s.
// modes stay empty.
EnvSpectrum circuit_to_spectrum(const CircuitParams& circ, double unit_rad_s = 1.0);

// The coupling element (L_c or C_c) that yields loss rate kappa_rad_s for
// fixed impedances; throws DomainError when kappa is beyond the reachable
// maximum of the circuit family.
CircuitParams element_for_kappa(double kappa_rad_s, double omega_r_rad_s, double z_r_ohm, double z_t_ohm,
                                Coupling rw);

// xi_k^2 = xi0^2 omega_k spacing / (1 + (omega_k/omega_cutoff)^2).
// spacing <= 0 selects the grid spacing (omega_0 for a single mode).
EnvSpectrum discretize_modes(double xi0, double omega_cutoff, Coupling rw, std::span<const double> omegas,
                             double spacing = 0.0, std::span<const std::size_t> dims = {});

// J(w) = 16 pi Re[alpha]^2 xi0^2 w / (1 + (w/omega_cutoff)^2).
double spin_boson_J(cplx alpha, double xi0, double omega_cutoff, double omega);

} // namespace dsc
