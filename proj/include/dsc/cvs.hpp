// cvs.hpp: coherent variational state of qubit, resonator and waveguide.
//
// The ansatz displaces the resonator by -/+alpha and mode k by -/+beta_k on
// the |up>/|down> branches. Eliminating beta_k through its stationarity
// condition leaves a two-parameter energy E(alpha, S) with S = sum |beta_k|^2
// and x = delta exp(-2(|alpha|^2 + S)).
//
// With r = Re(alpha) for inductive and Im(alpha) for capacitive waveguide
// coupling:
//   E = omega_r |alpha|^2 - 2 g Re(alpha) - 4 r^2 (f1(x) + x f2(x))
//       - (delta/2) exp(-2 |alpha|^2 - 8 r^2 f2(x))
// where f_n(x) = sum_k xi_k^2 / (x + omega_k)^n, or its continuum integral.

#pragma once

#include "dsc/environment.hpp"
#include "dsc/hilbert.hpp"
#include "dsc/rabi.hpp"

#include <array>
#include <optional>
#include <vector>

namespace dsc {

enum class FMode { discrete_sum, continuum_closed_form, continuum_quadrature };

std::string_view to_string(FMode m) noexcept;
FMode parse_fmode(std::string_view text);  // throws DomainError

struct CvsProblem {
    ModelParams model;
    EnvSpectrum env;
    FMode f_mode{FMode::continuum_closed_form};
};

struct CvsSolution {
    cplx alpha_bar{0.0};
    double S_bar{0.0};          // +inf on the localized branch
    double coherence_C{1.0};    // exp(-2 S_bar)
    double energy{0.0};
    int iterations{0};
    double residual{0.0};
    bool localized{false};      // minimum reached only as S -> inf
};

// f1, f2, f3 with f1' = -f2 and f2' = -2 f3. Continuum values at x = 0:
// f1 is finite, f2 and f3 are +inf.
double f1(double x, const CvsProblem& p);
double f2(double x, const CvsProblem& p);
double f3(double x, const CvsProblem& p);

double cvs_energy(cplx alpha, double S, const CvsProblem& p);

// (dE/dRe alpha, dE/dIm alpha, dE/dS).
std::array<double, 3> cvs_energy_gradient(cplx alpha, double S, const CvsProblem& p);

struct SolverOptions {
    double tol{1e-12};
    int max_iter{200};
    // Scan the one-dimensional reduction in t = alpha^2 + S for the global
    // minimum before Newton polishing. false starts Newton at (g/(omega_r+delta), 0).
    bool global_scan{true};
    std::size_t scan_points{800};
};

// Inductive residuals: R1 = omega_r a + a x - g - 4 a f1(x), R2 = 4 a^2 f2(x) - S.
std::array<double, 2> inductive_residual(double alpha, double S, const CvsProblem& p);

CvsSolution solve_inductive(const CvsProblem& p, const SolverOptions& opt = {});

// Lowest-energy positive root of (omega_r + delta e^{-2a^2}) a = g; S = 0.
CvsSolution solve_capacitive(const CvsProblem& p, const SolverOptions& opt = {});

// Dispatches on p.env.rw_coupling.
CvsSolution solve(const CvsProblem& p, const SolverOptions& opt = {});

// Inductive: -2 xi_k Re(alpha)/(omega_k + x); capacitive: -2 i xi_k Im(alpha)/(omega_k + x).
std::vector<cplx> beta_k(cplx alpha, double S, const CvsProblem& p);

// ((1+C)/2)|phi_0^-><phi_0^-| + ((1-C)/2)|phi_0^+><phi_0^+| on (qubit, resonator).
DensityMatrix build_zts(cplx alpha_bar, double coherence_C, std::size_t resonator_dim);

} // namespace dsc
