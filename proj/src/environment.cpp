#include "dsc/environment.hpp"

#include "dsc/errors.hpp"

#include <cmath>
#include <numbers>

namespace dsc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lorentz(double omega, double cutoff) {
    if (std::isinf(cutoff)) return 1.0;
    const double r = omega / cutoff;
    return 1.0 / (1.0 + r * r);
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be a positive finite number");
}

} // namespace

double UnitSystem::rad_per_s() const noexcept { return kTwoPi * 1e9 * omega_r_ghz; }

void EnvSpectrum::validate() const {
    if (!(xi0 >= 0.0) || !std::isfinite(xi0)) throw DomainError("xi0 must be >= 0");
    if (!(omega_cutoff > 0.0)) throw DomainError("omega_cutoff must be > 0");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (!(modes[k].omega > 0.0)) throw DomainError("mode frequencies must be > 0");
        if (k && !(modes[k].omega > modes[k - 1].omega)) throw DomainError("mode frequencies must be strictly increasing");
        if (!(modes[k].xi >= 0.0)) throw DomainError("mode couplings must be >= 0");
        if (modes[k].dim < 2) throw DimensionError("mode dimensions must be >= 2");
    }
}

void CircuitParams::validate() const {
    require_positive(z_r_ohm, "Z_R");
    require_positive(z_t_ohm, "Z_T");
    if (c_r_farad) require_positive(*c_r_farad, "C_R");
    else require_positive(omega_r_rad_s, "omega_r (needed for C_R)");
    if (rw_coupling == Coupling::inductive) {
        if (!l_c_henry || c_c_farad) throw DomainError("inductive coupling needs L_c and no C_c");
        require_positive(*l_c_henry, "L_c");
    } else {
        if (!c_c_farad || l_c_henry) throw DomainError("capacitive coupling needs C_c and no L_c");
        require_positive(*c_c_farad, "C_c");
    }
}

double CircuitParams::resonator_capacitance() const {
    return c_r_farad ? *c_r_farad : 1.0 / (z_r_ohm * omega_r_rad_s);
}

double CircuitParams::series_capacitance() const {
    const double cr = resonator_capacitance();
    const double cc = c_c_farad.value_or(0.0);
    return cc * cr / (cc + cr);
}

double kappa(double xi0, double omega_cutoff, double omega_r) {
    return kTwoPi * xi0 * xi0 * omega_r * lorentz(omega_r, omega_cutoff);
}

double xi0_from_kappa(double kappa_value, double omega_cutoff, double omega_r) {
    if (!(kappa_value >= 0.0)) throw DomainError("kappa must be >= 0");
    require_positive(omega_r, "omega_r");
    return std::sqrt(kappa_value / (kTwoPi * omega_r * lorentz(omega_r, omega_cutoff)));
}

EnvSpectrum circuit_to_spectrum(const CircuitParams& circ, double unit_rad_s) {
    circ.validate();
    EnvSpectrum env;
    env.rw_coupling = circ.rw_coupling;
    if (circ.rw_coupling == Coupling::inductive) {
        env.xi0 = std::sqrt(circ.z_r_ohm / (kTwoPi * circ.z_t_ohm));
        env.omega_cutoff = circ.z_t_ohm / *circ.l_c_henry / unit_rad_s;
    } else {
        const double cs = circ.series_capacitance();
        const double cr = circ.resonator_capacitance();
        env.xi0 = std::sqrt(circ.z_t_ohm * cs * cs / (kTwoPi * circ.z_r_ohm * cr * cr));
        env.omega_cutoff = 1.0 / (circ.z_t_ohm * cs) / unit_rad_s;
    }
    return env;
}

CircuitParams element_for_kappa(double kappa_rad_s, double omega_r_rad_s, double z_r_ohm, double z_t_ohm,
                                Coupling rw) {
    require_positive(kappa_rad_s, "kappa");
    require_positive(omega_r_rad_s, "omega_r");
    CircuitParams c;
    c.z_r_ohm = z_r_ohm;
    c.z_t_ohm = z_t_ohm;
    c.omega_r_rad_s = omega_r_rad_s;
    c.rw_coupling = rw;
    if (rw == Coupling::inductive) {
        const double xi0_sq = z_r_ohm / (kTwoPi * z_t_ohm);
        const double ratio = kTwoPi * xi0_sq * omega_r_rad_s / kappa_rad_s - 1.0;
        if (!(ratio > 0.0)) throw DomainError("kappa exceeds the inductive circuit maximum 2 pi xi0^2 omega_r");
        const double cutoff = omega_r_rad_s / std::sqrt(ratio);
        c.l_c_henry = z_t_ohm / cutoff;
    } else {
        const double r = z_t_ohm / z_r_ohm;
        const double k = kappa_rad_s / omega_r_rad_s;
        if (!(k * r < 1.0)) throw DomainError("kappa exceeds the capacitive circuit maximum omega_r Z_R / Z_T");
        const double u = std::sqrt(k / (r * (1.0 - k * r)));
        if (!(u < 1.0)) throw DomainError("kappa needs C'_c >= C_R, which no finite C_c provides");
        const double cr = c.resonator_capacitance();
        c.c_c_farad = u * cr / (1.0 - u);
    }
    return c;
}

EnvSpectrum discretize_modes(double xi0, double omega_cutoff, Coupling rw, std::span<const double> omegas,
                             double spacing, std::span<const std::size_t> dims) {
    if (!dims.empty() && dims.size() != omegas.size()) throw DimensionError("one dimension per mode required");
    EnvSpectrum env;
    env.xi0 = xi0;
    env.omega_cutoff = omega_cutoff;
    env.rw_coupling = rw;
    if (spacing <= 0.0 && !omegas.empty()) spacing = omegas.size() > 1 ? omegas[1] - omegas[0] : omegas[0];
    env.mode_spacing = spacing;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const double w = omegas[k];
        const double xi = std::sqrt(xi0 * xi0 * w * spacing * lorentz(w, omega_cutoff));
        env.modes.push_back(Mode{w, xi, dims.empty() ? std::size_t{3} : dims[k]});
    }
    env.validate();
    return env;
}

double spin_boson_J(cplx alpha, double xi0, double omega_cutoff, double omega) {
    if (!(omega >= 0.0)) throw DomainError("spin_boson_J: omega must be >= 0");
    const double re = alpha.real();
    return 16.0 * std::numbers::pi * re * re * xi0 * xi0 * omega * lorentz(omega, omega_cutoff);
}

} // namespace dsc
