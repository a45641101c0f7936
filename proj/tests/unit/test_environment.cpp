#include "dsc/environment.hpp"
#include "dsc/errors.hpp"

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace dsc;
using namespace dsc::testing;

TEST_CASE("unit conversions round-trip to 1e-12 relative") {
    Rng rng(kSeed + 300);
    for (int trial = 0; trial < 200; ++trial) {
        const UnitSystem u{uniform(rng, 0.5, 20.0)};
        const double f = std::exp(uniform(rng, -10.0, 10.0));
        CHECK(std::abs(u.to_ghz(u.from_ghz(f)) / f - 1.0) < 1e-12);
        CHECK(std::abs(u.to_mhz(u.from_mhz(f)) / f - 1.0) < 1e-12);
        CHECK(std::abs(u.from_rad_per_s(f * u.rad_per_s()) / f - 1.0) < 1e-12);
        CHECK(std::abs(u.from_ghz(f) / u.from_mhz(1000.0 * f) - 1.0) < 1e-12);
    }
    CHECK(UnitSystem{6.0}.from_ghz(6.0) == 1.0);
}

TEST_CASE("kappa equals the golden-rule rate of the discretized bath at omega_r") {
    Rng rng(kSeed + 301);
    for (int trial = 0; trial < 50; ++trial) {
        const double xi0 = uniform(rng, 0.0, 0.5);
        const double cutoff = std::exp(uniform(rng, -4.0, 4.0));
        const double dw = uniform(rng, 1e-4, 1e-2);
        // A mode sitting exactly on the resonator frequency.
        const std::vector<double> omegas{1.0 - dw, 1.0, 1.0 + dw};
        const EnvSpectrum env = discretize_modes(xi0, cutoff, Coupling::inductive, omegas, dw);
        const double golden = 2.0 * kPi * env.modes[1].xi * env.modes[1].xi / dw;
        CHECK(kappa(xi0, cutoff, 1.0) == doctest::Approx(golden).epsilon(1e-12));
        if (xi0 > 0.0) CHECK(xi0_from_kappa(kappa(xi0, cutoff, 1.0), cutoff, 1.0) == doctest::Approx(xi0).epsilon(1e-12));
    }
}

TEST_CASE("discretized couplings follow the Ohmic-Lorentzian profile") {
    const std::vector<double> omegas{5.0 / 6.0, 10.0 / 6.0, 15.0 / 6.0, 20.0 / 6.0};
    const EnvSpectrum env = discretize_modes(0.3, 2.0, Coupling::capacitive, omegas);
    CHECK(env.mode_spacing == doctest::Approx(5.0 / 6.0));
    for (const Mode& m : env.modes) {
        const double expect = 0.09 * m.omega * env.mode_spacing / (1.0 + m.omega * m.omega / 4.0);
        CHECK(m.xi * m.xi == doctest::Approx(expect).epsilon(1e-14));
        CHECK(m.dim == 3);
    }
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(discretize_modes(0.3, 2.0, Coupling::inductive, bad), DomainError);
    const std::vector<std::size_t> dims{3};
    CHECK_THROWS_AS(discretize_modes(0.3, 2.0, Coupling::inductive, omegas, 0.0, dims), DimensionError);
}

TEST_CASE("inductive circuit maps to xi0^2 = Z_R/(2 pi Z_T) and cutoff Z_T/L_c") {
    CircuitParams c;
    c.z_r_ohm = 30.0;
    c.z_t_ohm = 50.0;
    c.omega_r_rad_s = 2.0 * kPi * 6e9;
    c.l_c_henry = 1e-9;
    const EnvSpectrum env = circuit_to_spectrum(c, c.omega_r_rad_s);
    CHECK(env.xi0 * env.xi0 == doctest::Approx(30.0 / (2.0 * kPi * 50.0)));
    CHECK(env.omega_cutoff * c.omega_r_rad_s == doctest::Approx(50.0 / 1e-9));
    c.c_c_farad = 1e-15;
    CHECK_THROWS_AS(circuit_to_spectrum(c), DomainError);
}

TEST_CASE("capacitive circuit reproduces the bare LC loss rate for a high cutoff") {
    Rng rng(kSeed + 302);
    for (int trial = 0; trial < 30; ++trial) {
        CircuitParams c;
        c.z_r_ohm = uniform(rng, 10.0, 100.0);
        c.z_t_ohm = uniform(rng, 10.0, 100.0);
        c.omega_r_rad_s = 2.0 * kPi * uniform(rng, 3e9, 10e9);
        c.rw_coupling = Coupling::capacitive;
        c.c_c_farad = std::exp(uniform(rng, std::log(1e-17), std::log(1e-15)));
        const double cr = 1.0 / (c.z_r_ohm * c.omega_r_rad_s);
        const double cs = cr * *c.c_c_farad / (cr + *c.c_c_farad);
        const double k_lc = c.omega_r_rad_s * c.z_t_ohm * cs * cs / (c.z_r_ohm * cr * cr);
        const EnvSpectrum env = circuit_to_spectrum(c);
        CHECK(env.omega_cutoff == doctest::Approx(1.0 / (c.z_t_ohm * cs)).epsilon(1e-12));
        const double k = kappa(env.xi0, env.omega_cutoff, c.omega_r_rad_s);
        const double r = c.omega_r_rad_s / env.omega_cutoff;
        CHECK(k == doctest::Approx(k_lc / (1.0 + r * r)).epsilon(1e-12));
    }
}

TEST_CASE("element_for_kappa inverts circuit_to_spectrum") {
    Rng rng(kSeed + 303);
    const double wr = 2.0 * kPi * 6e9;
    for (Coupling rw : {Coupling::inductive, Coupling::capacitive}) {
        for (int trial = 0; trial < 40; ++trial) {
            const double k = 2.0 * kPi * std::exp(uniform(rng, std::log(1e4), std::log(1e9)));
            const CircuitParams c = element_for_kappa(k, wr, 30.0, 50.0, rw);
            const EnvSpectrum env = circuit_to_spectrum(c, wr);
            CHECK(kappa(env.xi0, env.omega_cutoff, 1.0) * wr == doctest::Approx(k).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(element_for_kappa(2.0 * kPi * 1e11, wr, 30.0, 50.0, Coupling::inductive), DomainError);
    CHECK_THROWS_AS(element_for_kappa(0.0, wr, 30.0, 50.0, Coupling::inductive), DomainError);
}

TEST_CASE("spin-boson spectral density is Ohmic at low frequency") {
    const double j1 = spin_boson_J(0.5, 0.2, 10.0, 1e-3);
    const double j2 = spin_boson_J(0.5, 0.2, 10.0, 2e-3);
    CHECK(j2 / j1 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(spin_boson_J(cplx(0.0, 0.5), 0.2, 10.0, 1.0) == 0.0);
    CHECK_THROWS_AS(spin_boson_J(0.5, 0.2, 10.0, -1.0), DomainError);
}
