#include "dsc/cvs.hpp"

#include "dsc/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void require_continuum(const CvsProblem& p) {
    if (!std::isfinite(p.env.omega_cutoff))
        throw DomainError("continuum f-functions need a finite omega_cutoff");
}

double discrete_f(double x, const CvsProblem& p, int power) {
    double s = 0.0;
    for (const auto& m : p.env.modes) s += m.xi * m.xi / std::pow(x + m.omega, power);
    return s;
}

// xi0^2 * integral_0^inf w / ((1 + w^2/c^2) (x + w)^power) dw, split at x and c
// with a logarithmic substitution between them.
double quadrature_f(double x, const CvsProblem& p, int power) {
    using boost::math::quadrature::gauss_kronrod;
    const double c = p.env.omega_cutoff;
    const auto integrand = [c, x, power](double w) {
        const double r = w / c;
        return w / ((1.0 + r * r) * std::pow(x + w, power));
    };
    const double lo = std::min(x, c);
    const double hi = std::max(x, c);
    constexpr double tol = 1e-12;
    constexpr unsigned depth = 10;
    double total = 0.0;
    if (lo > 0.0) total += gauss_kronrod<double, 31>::integrate(integrand, 0.0, lo, depth, tol);
    if (hi > lo && lo > 0.0) {
        const auto log_integrand = [&integrand](double s) {
            const double w = std::exp(s);
            return integrand(w) * w;
        };
        total += gauss_kronrod<double, 31>::integrate(log_integrand, std::log(lo), std::log(hi), depth, tol);
    } else if (lo == 0.0) {
        total += gauss_kronrod<double, 31>::integrate(integrand, 0.0, hi, depth, tol);
    }
    total += gauss_kronrod<double, 31>::integrate(integrand, hi, kInf, depth, tol);
    return p.env.xi0 * p.env.xi0 * total;
}

double closed_f1(double x, double xi0, double c) {
    if (x == 0.0) return kPi * xi0 * xi0 * c / 2.0;
    const double s = x * x + c * c;
    return xi0 * xi0 * c * c / s * (-x * std::log(c / x) + kPi * c / 2.0);
}

double closed_f2(double x, double xi0, double c) {
    if (x == 0.0) return kInf;
    const double s = x * x + c * c;
    const double d = x * x - c * c;
    return xi0 * xi0 * c * c * (-1.0 / s + d / (s * s) * std::log(x / c) + kPi * c * x / (s * s));
}

double closed_f3(double x, double xi0, double c) {
    if (x == 0.0) return kInf;
    const double s = x * x + c * c;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double d = x * x - c * c;
    const double f2p = 2.0 * x / s2 + (2.0 * x / s2 - 4.0 * x * d / s3) * std::log(x / c) + d / (x * s2) +
                       kPi * c / s2 - 4.0 * kPi * c * x * x / s3;
    return -0.5 * xi0 * xi0 * c * c * f2p;
}

double f_any(double x, const CvsProblem& p, int power) {
    if (!(x >= 0.0)) throw DomainError("f-functions need x >= 0");
    switch (p.f_mode) {
    case FMode::discrete_sum:
        return discrete_f(x, p, power);
    case FMode::continuum_closed_form:
        if (p.env.xi0 == 0.0) return 0.0;
        require_continuum(p);
        if (power == 1) return closed_f1(x, p.env.xi0, p.env.omega_cutoff);
        if (power == 2) return closed_f2(x, p.env.xi0, p.env.omega_cutoff);
        return closed_f3(x, p.env.xi0, p.env.omega_cutoff);
    case FMode::continuum_quadrature:
        if (p.env.xi0 == 0.0) return 0.0;
        require_continuum(p);
        if (x == 0.0 && power > 1) return kInf;
        return quadrature_f(x, p, power);
    }
    return 0.0;
}

bool is_continuum(const CvsProblem& p) { return p.f_mode != FMode::discrete_sum; }

bool env_is_trivial(const CvsProblem& p) {
    if (is_continuum(p)) return p.env.xi0 == 0.0;
    return std::all_of(p.env.modes.begin(), p.env.modes.end(), [](const Mode& m) { return m.xi == 0.0; });
}

double env_component(cplx alpha, const CvsProblem& p) {
    return p.env.rw_coupling == Coupling::inductive ? alpha.real() : alpha.imag();
}

void check_model(const ModelParams& m) {
    if (!(m.omega_r > 0.0)) throw DomainError("omega_r must be > 0");
    if (!(m.delta >= 0.0)) throw DomainError("delta must be >= 0");
    if (!(m.g >= 0.0)) throw DomainError("g must be >= 0");
}

double closed_energy(double a, const ModelParams& m) {
    return m.omega_r * a * a - 2.0 * m.g * a - 0.5 * m.delta * std::exp(-2.0 * a * a);
}

// Lowest-energy root of (omega_r + delta e^{-2a^2}) a = g.
double closed_model_alpha(const ModelParams& m, std::size_t scan_points, int& evaluations) {
    if (m.g == 0.0) return 0.0;
    const auto phi = [&m, &evaluations](double a) {
        ++evaluations;
        return (m.omega_r + m.delta * std::exp(-2.0 * a * a)) * a - m.g;
    };
    const double lo = m.g / (m.omega_r + m.delta);
    const double hi = m.g / m.omega_r;
    if (hi - lo <= 0.0) return hi;
    double best = lo;
    double best_e = kInf;
    double a_prev = lo;
    double phi_prev = phi(lo);
    if (phi_prev == 0.0) {
        best = lo;
        best_e = closed_energy(lo, m);
    }
    for (std::size_t i = 1; i <= scan_points; ++i) {
        const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(scan_points);
        const double ph = phi(a);
        double root = std::numeric_limits<double>::quiet_NaN();
        if (ph == 0.0) {
            root = a;
        } else if (phi_prev < 0.0 && ph > 0.0) {
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(phi, a_prev, a, phi_prev, ph,
                                                             boost::math::tools::eps_tolerance<double>(53), iters);
            root = 0.5 * (r.first + r.second);
        }
        if (!std::isnan(root)) {
            const double e = closed_energy(root, m);
            if (e < best_e) {
                best_e = e;
                best = root;
            }
        }
        a_prev = a;
        phi_prev = ph;
    }
    return best;
}

CvsSolution closed_solution(const CvsProblem& p, const SolverOptions& opt) {
    CvsSolution sol;
    int evals = 0;
    const double a = closed_model_alpha(p.model, opt.scan_points, evals);
    sol.alpha_bar = a;
    sol.S_bar = 0.0;
    sol.coherence_C = 1.0;
    sol.energy = cvs_energy(a, 0.0, p);
    sol.iterations = evals;
    sol.residual = std::abs((p.model.omega_r + p.model.delta * std::exp(-2.0 * a * a)) * a - p.model.g);
    return sol;
}

struct NewtonResult {
    double alpha;
    double S;
    double residual;
    int iterations;
};

double max_abs(const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

NewtonResult damped_newton(double alpha, double S, const CvsProblem& p, const SolverOptions& opt) {
    const ModelParams& m = p.model;
    auto res = inductive_residual(alpha, S, p);
    double norm = max_abs(res);
    int it = 0;
    while (norm >= opt.tol) {
        if (it >= opt.max_iter) throw SolverError("inductive CVS solver did not converge", alpha, S, norm, it);
        ++it;
        const double x = m.delta * std::exp(-2.0 * (alpha * alpha + S));
        const double v1 = f1(x, p), v2 = f2(x, p), v3 = f3(x, p);
        const double a2 = alpha * alpha;
        const double j11 = m.omega_r + x - 4.0 * a2 * x - 4.0 * v1 - 16.0 * a2 * x * v2;
        const double j12 = -2.0 * alpha * x - 8.0 * alpha * x * v2;
        const double j21 = 8.0 * alpha * v2 + 32.0 * a2 * alpha * x * v3;
        const double j22 = 16.0 * a2 * x * v3 - 1.0;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) throw SolverError("singular Jacobian in the CVS solver", alpha, S, norm, it);
        const double da = (res[0] * j22 - res[1] * j12) / det;
        const double ds = (j11 * res[1] - j21 * res[0]) / det;
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            const double a_new = alpha - lambda * da;
            const double s_new = std::max(0.0, S - lambda * ds);
            const auto r_new = inductive_residual(a_new, s_new, p);
            const double n_new = max_abs(r_new);
            if (std::isfinite(n_new) && n_new < norm) {
                alpha = a_new;
                S = s_new;
                res = r_new;
                norm = n_new;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            if (norm < 1e3 * opt.tol) break;  // at the rounding floor of the residual
            throw SolverError("CVS Newton step stalled", alpha, S, norm, it);
        }
    }
    return {alpha, S, norm, it};
}

} // namespace

std::string_view to_string(FMode m) noexcept {
    switch (m) {
    case FMode::discrete_sum: return "discrete_sum";
    case FMode::continuum_closed_form: return "continuum_closed_form";
    case FMode::continuum_quadrature: return "continuum_quadrature";
    }
    return "?";
}

FMode parse_fmode(std::string_view text) {
    if (text == "discrete_sum") return FMode::discrete_sum;
    if (text == "continuum_closed_form") return FMode::continuum_closed_form;
    if (text == "continuum_quadrature") return FMode::continuum_quadrature;
    throw DomainError("unknown f_mode '" + std::string(text) + "'");
}

double f1(double x, const CvsProblem& p) { return f_any(x, p, 1); }
double f2(double x, const CvsProblem& p) { return f_any(x, p, 2); }
double f3(double x, const CvsProblem& p) { return f_any(x, p, 3); }

double cvs_energy(cplx alpha, double S, const CvsProblem& p) {
    if (!(S >= 0.0)) throw DomainError("cvs_energy needs S >= 0");
    const ModelParams& m = p.model;
    const double mag2 = std::norm(alpha);
    const double r = env_component(alpha, p);
    const double base = m.omega_r * mag2 - 2.0 * m.g * alpha.real();
    if (r == 0.0 || env_is_trivial(p)) return base - 0.5 * m.delta * std::exp(-2.0 * mag2);
    const double x = m.delta * std::exp(-2.0 * (mag2 + S));
    const double v1 = f1(x, p);
    const double v2 = f2(x, p);
    const double xf2 = (x == 0.0) ? 0.0 : x * v2;
    const double q = std::exp(-2.0 * mag2 - 8.0 * r * r * v2);
    return base - 4.0 * r * r * (v1 + xf2) - 0.5 * m.delta * q;
}

std::array<double, 3> cvs_energy_gradient(cplx alpha, double S, const CvsProblem& p) {
    const ModelParams& m = p.model;
    const double ar = alpha.real();
    const double ai = alpha.imag();
    const double mag2 = std::norm(alpha);
    const bool ind = p.env.rw_coupling == Coupling::inductive;
    const double r = ind ? ar : ai;
    std::array<double, 3> grad{2.0 * m.omega_r * ar - 2.0 * m.g, 2.0 * m.omega_r * ai, 0.0};
    if (r == 0.0 || env_is_trivial(p)) {
        const double q0 = 0.5 * m.delta * std::exp(-2.0 * mag2);
        grad[0] += 4.0 * ar * q0;
        grad[1] += 4.0 * ai * q0;
        return grad;
    }
    const double x = m.delta * std::exp(-2.0 * (mag2 + S));
    const double v1 = f1(x, p), v2 = f2(x, p), v3 = f3(x, p);
    const double q = std::exp(-2.0 * mag2 - 8.0 * r * r * v2);
    const double r2 = r * r;
    // h = f1 + x f2 has h' = -2 x f3; the exponent -2|a|^2 - 8 r^2 f2 has dx-derivative 16 r^2 f3.
    for (int c = 0; c < 2; ++c) {
        const double comp = (c == 0) ? ar : ai;
        const bool carries_r = (c == 0) == ind;
        const double dx = -4.0 * comp * x;
        double g = -4.0 * r2 * (-2.0 * x * v3) * dx;
        double dexp = -4.0 * comp + 16.0 * r2 * v3 * dx;
        if (carries_r) {
            g += -8.0 * r * (v1 + x * v2);
            dexp += -16.0 * r * v2;
        }
        grad[static_cast<std::size_t>(c)] += g - 0.5 * m.delta * q * dexp;
    }
    grad[2] = 16.0 * r2 * x * v3 * (m.delta * q - x);
    return grad;
}

std::array<double, 2> inductive_residual(double alpha, double S, const CvsProblem& p) {
    const ModelParams& m = p.model;
    const double x = m.delta * std::exp(-2.0 * (alpha * alpha + S));
    const double v1 = f1(x, p);
    const double v2 = f2(x, p);
    return {m.omega_r * alpha + alpha * x - m.g - 4.0 * alpha * v1, 4.0 * alpha * alpha * v2 - S};
}

CvsSolution solve_inductive(const CvsProblem& p, const SolverOptions& opt) {
    if (p.env.rw_coupling != Coupling::inductive) throw ContractError("solve_inductive needs inductive waveguide coupling");
    const ModelParams& m = p.model;
    check_model(m);
    if (m.g == 0.0) {
        CvsSolution sol;
        sol.energy = cvs_energy(0.0, 0.0, p);
        return sol;
    }
    if (env_is_trivial(p)) return closed_solution(p, opt);

    const double f1_0 = f1(0.0, p);
    const double soft = m.omega_r - 4.0 * f1_0;
    if (!(soft > 0.0)) throw DomainError("omega_r - 4 f1(0) <= 0: the environment-dressed resonator is unstable");
    const double alpha_loc = m.g / soft;

    if (m.delta == 0.0) {
        CvsSolution sol;
        sol.alpha_bar = alpha_loc;
        sol.S_bar = 4.0 * alpha_loc * alpha_loc * f2(0.0, p);
        sol.localized = !std::isfinite(sol.S_bar);
        sol.coherence_C = std::exp(-2.0 * sol.S_bar);
        sol.energy = -m.g * m.g / soft;
        if (!sol.localized) sol.energy = cvs_energy(alpha_loc, sol.S_bar, p);
        return sol;
    }

    double a0 = m.g / (m.omega_r + m.delta);
    double s0 = 0.0;
    if (opt.global_scan) {
        // Stationary points are the roots of psi(t), t = alpha^2 + S.
        const auto alpha_of = [&](double t) {
            const double x = m.delta * std::exp(-2.0 * t);
            return m.g / (m.omega_r + x - 4.0 * f1(x, p));
        };
        const auto psi = [&](double t) {
            const double x = m.delta * std::exp(-2.0 * t);
            const double a = alpha_of(t);
            return a * a - t / (1.0 + 4.0 * f2(x, p));
        };
        double t_max = 40.0;
        if (!is_continuum(p)) t_max = std::max(t_max, alpha_loc * alpha_loc * (1.0 + 4.0 * f2(0.0, p)) + 1.0);

        struct Candidate {
            double alpha, S, energy;
            bool localized;
        };
        std::vector<Candidate> cands;
        double t_prev = 0.0;
        double psi_prev = psi(0.0);
        for (std::size_t i = 1; i <= opt.scan_points; ++i) {
            const double t = t_max * static_cast<double>(i) / static_cast<double>(opt.scan_points);
            const double ps = psi(t);
            if ((psi_prev > 0.0) != (ps > 0.0)) {
                std::uintmax_t iters = 200;
                const auto r = boost::math::tools::toms748_solve(psi, t_prev, t, psi_prev, ps,
                                                                 boost::math::tools::eps_tolerance<double>(50), iters);
                const double tr = 0.5 * (r.first + r.second);
                const double a = alpha_of(tr);
                const double s = std::max(0.0, tr - a * a);
                cands.push_back({a, s, cvs_energy(a, s, p), false});
            }
            t_prev = t;
            psi_prev = ps;
        }
        if (is_continuum(p)) cands.push_back({alpha_loc, kInf, -m.g * m.g / soft, true});
        if (cands.empty()) throw SolverError("no stationary point found in the t scan", a0, s0, kInf, 0);
        const auto best = std::min_element(cands.begin(), cands.end(),
                                           [](const Candidate& x, const Candidate& y) { return x.energy < y.energy; });
        if (best->localized) {
            CvsSolution sol;
            sol.alpha_bar = best->alpha;
            sol.S_bar = kInf;
            sol.coherence_C = 0.0;
            sol.energy = best->energy;
            sol.localized = true;
            return sol;
        }
        a0 = best->alpha;
        s0 = best->S;
    }
    const NewtonResult nr = damped_newton(a0, s0, p, opt);
    CvsSolution sol;
    sol.alpha_bar = nr.alpha;
    sol.S_bar = nr.S;
    sol.coherence_C = std::exp(-2.0 * nr.S);
    sol.energy = cvs_energy(nr.alpha, nr.S, p);
    sol.iterations = nr.iterations;
    sol.residual = nr.residual;
    return sol;
}

CvsSolution solve_capacitive(const CvsProblem& p, const SolverOptions& opt) {
    if (p.env.rw_coupling != Coupling::capacitive) throw ContractError("solve_capacitive needs capacitive waveguide coupling");
    check_model(p.model);
    return closed_solution(p, opt);
}

CvsSolution solve(const CvsProblem& p, const SolverOptions& opt) {
    return p.env.rw_coupling == Coupling::inductive ? solve_inductive(p, opt) : solve_capacitive(p, opt);
}

std::vector<cplx> beta_k(cplx alpha, double S, const CvsProblem& p) {
    const double x = std::isinf(S) ? 0.0 : p.model.delta * std::exp(-2.0 * (std::norm(alpha) + S));
    std::vector<cplx> out;
    out.reserve(p.env.modes.size());
    for (const auto& mode : p.env.modes) {
        const double w = -2.0 * mode.xi / (mode.omega + x);
        out.push_back(p.env.rw_coupling == Coupling::inductive ? cplx(w * alpha.real(), 0.0)
                                                               : cplx(0.0, w * alpha.imag()));
    }
    return out;
}

DensityMatrix build_zts(cplx alpha_bar, double coherence_C, std::size_t resonator_dim) {
    if (!(coherence_C >= 0.0 && coherence_C <= 1.0)) throw DomainError("coherence C must lie in [0, 1]");
    const Vector minus = approx_eigenstate(0, Sign::minus, alpha_bar, resonator_dim).amplitudes();
    const Vector plus = approx_eigenstate(0, Sign::plus, alpha_bar, resonator_dim).amplitudes();
    Matrix rho = 0.5 * (1.0 + coherence_C) * (minus * minus.adjoint()) +
                 0.5 * (1.0 - coherence_C) * (plus * plus.adjoint());
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(qr_space(resonator_dim), std::move(rho));
}

} // namespace dsc
