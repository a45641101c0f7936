#include "dsc/cvs.hpp"
#include "dsc/errors.hpp"

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dsc;
using namespace dsc::testing;

namespace {

CvsProblem continuum(double xi0, double cutoff, Coupling rw, FMode mode = FMode::continuum_closed_form) {
    CvsProblem p;
    p.model = {1.0, 0.2, 1.0, Coupling::inductive, 30};
    p.env.xi0 = xi0;
    p.env.omega_cutoff = cutoff;
    p.env.rw_coupling = rw;
    p.f_mode = mode;
    return p;
}

// The four-mode bath used for the exact-diagonalization comparisons.
CvsProblem four_modes(double xi0, double cutoff, Coupling rw) {
    CvsProblem p = continuum(xi0, cutoff, rw, FMode::discrete_sum);
    const std::vector<double> omegas{5.0 / 6.0, 10.0 / 6.0, 15.0 / 6.0, 20.0 / 6.0};
    p.env = discretize_modes(xi0, cutoff, rw, omegas);
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("f1, f2, f3: closed form agrees with adaptive quadrature") {
    Rng rng(kSeed + 400);
    for (int trial = 0; trial < 60; ++trial) {
        const double xi0 = uniform(rng, 0.05, 0.5);
        const double c = std::exp(uniform(rng, std::log(1e-3), std::log(1e2)));
        const double x = std::exp(uniform(rng, std::log(1e-9), std::log(2.0)));
        const CvsProblem closed = continuum(xi0, c, Coupling::inductive);
        const CvsProblem quad = continuum(xi0, c, Coupling::inductive, FMode::continuum_quadrature);
        CHECK(rel(f1(x, closed), f1(x, quad)) < 1e-6);
        CHECK(rel(f2(x, closed), f2(x, quad)) < 1e-6);
        CHECK(rel(f3(x, closed), f3(x, quad)) < 1e-6);
    }
}

TEST_CASE("f1 closed form agrees with a Simpson oracle on a compactified axis") {
    // w = c t / (1 - t) maps [0, 1) onto [0, inf).
    for (double c : {0.02, 0.5, 3.0})
        for (double x : {1e-3, 0.1, 1.0}) {
            const CvsProblem p = continuum(0.3, c, Coupling::inductive);
            const auto integrand = [c, x](double t) {
                if (t >= 1.0) return c;  // the integrand tends to c at infinity
                const double w = c * t / (1.0 - t);
                const double jac = c / ((1.0 - t) * (1.0 - t));
                return w / ((1.0 + w * w / (c * c)) * (x + w)) * jac;
            };
            CHECK(rel(f1(x, p), 0.09 * simpson(integrand, 0.0, 1.0, 400000)) < 1e-6);
        }
}

TEST_CASE("bath sums satisfy f1' = -f2 and f2' = -2 f3") {
    Rng rng(kSeed + 401);
    for (int trial = 0; trial < 30; ++trial) {
        const CvsProblem p = trial % 2 ? four_modes(0.3, 2.0, Coupling::inductive)
                                       : continuum(uniform(rng, 0.05, 0.5), uniform(rng, 0.01, 5.0), Coupling::inductive);
        const double x = uniform(rng, 0.01, 1.0);
        const double h = 1e-5 * x;
        CHECK(rel((f1(x + h, p) - f1(x - h, p)) / (2.0 * h), -f2(x, p)) < 1e-6);
        CHECK(rel((f2(x + h, p) - f2(x - h, p)) / (2.0 * h), -2.0 * f3(x, p)) < 1e-6);
    }
}

TEST_CASE("bath sums: edge cases") {
    CHECK(f1(0.1, continuum(0.0, 1.0, Coupling::inductive)) == 0.0);
    CHECK(std::isinf(f2(0.0, continuum(0.3, 1.0, Coupling::inductive))));
    CHECK(f1(0.0, continuum(0.3, 1.0, Coupling::inductive)) == doctest::Approx(kPi * 0.09 * 1.0 / 2.0));
    CHECK_THROWS_AS(f1(0.1, continuum(0.3, std::numeric_limits<double>::infinity(), Coupling::inductive)), DomainError);
}

TEST_CASE("analytic energy gradient matches central finite differences") {
    Rng rng(kSeed + 402);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const Coupling rw = trial % 2 ? Coupling::capacitive : Coupling::inductive;
        CvsProblem p = trial % 3 == 0 ? four_modes(uniform(rng, 0.05, 0.4), uniform(rng, 0.5, 5.0), rw)
                                      : continuum(uniform(rng, 0.05, 0.4), uniform(rng, 0.01, 2.0), rw);
        p.model.delta = uniform(rng, 0.05, 0.5);
        p.model.g = uniform(rng, 0.2, 1.5);
        const cplx a(uniform(rng, 0.1, 1.5), uniform(rng, -1.0, 1.0));
        const double s = uniform(rng, 0.0, 0.5);
        const auto grad = cvs_energy_gradient(a, s, p);
        const double h = 1e-6;
        const double fd[3] = {
            (cvs_energy(a + h, s, p) - cvs_energy(a - h, s, p)) / (2.0 * h),
            (cvs_energy(a + cplx(0.0, h), s, p) - cvs_energy(a - cplx(0.0, h), s, p)) / (2.0 * h),
            (cvs_energy(a, s + h, p) - cvs_energy(a, s - h, p)) / (2.0 * h),
        };
        for (int k = 0; k < 3; ++k) {
            const double scale = std::max({std::abs(fd[k]), std::abs(grad[static_cast<std::size_t>(k)]), 1e-3});
            CHECK(std::abs(grad[static_cast<std::size_t>(k)] - fd[k]) / scale < 1e-6);
            ++checked;
        }
    }
    CHECK(checked == 240);
}

TEST_CASE("closed-model alpha matches the bisection oracle") {
    Rng rng(kSeed + 403);
    for (int trial = 0; trial < 60; ++trial) {
        CvsProblem p = continuum(0.0, 1.0, trial % 2 ? Coupling::capacitive : Coupling::inductive);
        p.model.omega_r = uniform(rng, 0.5, 2.0);
        p.model.delta = uniform(rng, 0.0, 3.0);
        p.model.g = uniform(rng, 0.0, 3.0);
        const CvsSolution s = solve(p);
        CHECK(std::abs(s.alpha_bar.real() - closed_alpha_oracle(p.model.omega_r, p.model.delta, p.model.g)) < 1e-10);
        CHECK(s.coherence_C == 1.0);
        CHECK(s.S_bar == 0.0);
    }
}

TEST_CASE("capacitive waveguide coupling leaves the solution unchanged") {
    Rng rng(kSeed + 404);
    for (int trial = 0; trial < 20; ++trial) {
        CvsProblem ref = continuum(0.0, 1.0, Coupling::capacitive);
        ref.model.delta = uniform(rng, 0.05, 1.0);
        ref.model.g = uniform(rng, 0.1, 2.0);
        const CvsSolution base = solve_capacitive(ref);
        CvsProblem p = ref;
        p.env.xi0 = uniform(rng, 0.01, 0.5);
        p.env.omega_cutoff = uniform(rng, 0.01, 10.0);
        const CvsSolution s = solve_capacitive(p);
        CHECK(std::abs(s.alpha_bar - base.alpha_bar) < 1e-12);
        CHECK(s.coherence_C == base.coherence_C);
    }
    CHECK_THROWS_AS(solve_capacitive(continuum(0.1, 1.0, Coupling::inductive)), ContractError);
    CHECK_THROWS_AS(solve_inductive(continuum(0.1, 1.0, Coupling::capacitive)), ContractError);
}

TEST_CASE("inductive solution is stationary and globally minimal") {
    Rng rng(kSeed + 405);
    for (int trial = 0; trial < 25; ++trial) {
        CvsProblem p = trial % 2 ? four_modes(uniform(rng, 0.05, 0.3), uniform(rng, 0.5, 5.0), Coupling::inductive)
                                 : continuum(uniform(rng, 0.05, 0.3), uniform(rng, 0.005, 0.5), Coupling::inductive);
        p.model.delta = uniform(rng, 0.05, 0.4);
        p.model.g = uniform(rng, 0.2, 1.4);
        const CvsSolution s = solve(p);
        CHECK(std::isfinite(s.energy));
        CHECK(s.coherence_C >= 0.0);
        CHECK(s.coherence_C <= 1.0);
        if (!s.localized) {
            const auto r = inductive_residual(s.alpha_bar.real(), s.S_bar, p);
            CHECK(std::abs(r[0]) < 1e-9);
            CHECK(std::abs(r[1]) < 1e-9);
        }
        for (int probe = 0; probe < 200; ++probe) {
            const cplx a(uniform(rng, 0.0, 2.0), uniform(rng, -0.3, 0.3));
            const double sp = uniform(rng, 0.0, 5.0);
            CHECK(s.energy <= cvs_energy(a, sp, p) + 1e-10);
        }
    }
}

TEST_CASE("single-start Newton reproduces the scanned solution in the weak-loss regime") {
    const CvsProblem p = continuum(0.3, 0.02, Coupling::inductive);
    const CvsSolution scanned = solve(p);
    SolverOptions opt;
    opt.global_scan = false;
    const CvsSolution newton = solve(p, opt);
    CHECK(std::abs(scanned.alpha_bar - newton.alpha_bar) < 1e-10);
    CHECK(std::abs(scanned.S_bar - newton.S_bar) < 1e-10);
}

TEST_CASE("strong loss drives the inductive solution to the localized branch") {
    CvsProblem p = continuum(0.3, 0.5, Coupling::inductive);
    const CvsSolution s = solve(p);
    CHECK(s.localized);
    CHECK(s.coherence_C == 0.0);
    CHECK(std::isinf(s.S_bar));
    CHECK(s.alpha_bar.real() == doctest::Approx(1.0 / (1.0 - 4.0 * f1(0.0, p))));
}

TEST_CASE("g = 0 gives the empty resonator") {
    CvsProblem p = continuum(0.3, 0.1, Coupling::inductive);
    p.model.g = 0.0;
    const CvsSolution s = solve(p);
    CHECK(s.alpha_bar == cplx(0.0));
    CHECK(s.coherence_C == 1.0);
}

TEST_CASE("zero-temperature state has purity (1 + C^2)/2") {
    Rng rng(kSeed + 406);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = uniform(rng, 0.0, 2.5);
        const double c = uniform(rng, 0.0, 1.0);
        const DensityMatrix rho = build_zts(a, c, recommended_dim(a));
        CHECK(std::abs(rho.purity() - 0.5 * (1.0 + c * c)) < 1e-12);
        CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(build_zts(1.0, 1.5, 20), DomainError);
}

TEST_CASE("mode displacements scale with the conditional displacement component") {
    const CvsProblem ind = four_modes(0.3, 2.0, Coupling::inductive);
    const CvsProblem cap = four_modes(0.3, 2.0, Coupling::capacitive);
    const auto bi = beta_k(cplx(1.0, 0.0), 0.1, ind);
    const auto bc = beta_k(cplx(1.0, 0.0), 0.1, cap);
    REQUIRE(bi.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(bi[k].real() < 0.0);
        CHECK(bc[k] == cplx(0.0));
    }
}
