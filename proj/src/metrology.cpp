#include "dsc/metrology.hpp"

#include "dsc/errors.hpp"
#include "dsc/kernels.hpp"
#include "lapack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace dsc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_single_mode(const SpaceLabel& s, const char* what) {
    if (s.size() != 1) throw LabelError(std::string(what) + " needs a single-mode resonator state, got " + to_string(s));
}

std::pair<Matrix, Matrix> quadratures(Eigen::Index n) {
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Matrix ad = a.adjoint();
    const double s = 1.0 / std::sqrt(2.0);
    return {s * (a + ad), cplx(0.0, -s) * (a - ad)};
}

Eigen::Vector3d unit_vector(MeasurementAxis ax) {
    return {std::sin(ax.theta) * std::cos(ax.phi), std::sin(ax.theta) * std::sin(ax.phi), std::cos(ax.theta)};
}

double wrap_2pi(double phi) {
    double r = std::fmod(phi, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    if (r >= 2.0 * kPi) r = 0.0;
    return r;
}

// Deterministic Nelder-Mead minimizer in two variables.
struct Simplex2 {
    std::array<Eigen::Vector2d, 3> x;
    std::array<double, 3> f;
};

template <class Fn>
std::pair<Eigen::Vector2d, double> nelder_mead(Fn&& fn, Eigen::Vector2d start, Eigen::Vector2d step, double ftol,
                                               double xtol, int max_eval, int& evals) {
    Simplex2 s;
    s.x = {start, start + Eigen::Vector2d(step(0), 0.0), start + Eigen::Vector2d(0.0, step(1))};
    for (int k = 0; k < 3; ++k) s.f[static_cast<std::size_t>(k)] = fn(s.x[static_cast<std::size_t>(k)]);
    evals += 3;
    while (evals < max_eval) {
        std::array<int, 3> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(), [&s](int i, int j) { return s.f[i] < s.f[j]; });
        const auto b = static_cast<std::size_t>(order[0]);
        const auto m = static_cast<std::size_t>(order[1]);
        const auto w = static_cast<std::size_t>(order[2]);
        const double spread = std::max((s.x[m] - s.x[b]).cwiseAbs().maxCoeff(), (s.x[w] - s.x[b]).cwiseAbs().maxCoeff());
        if (std::abs(s.f[w] - s.f[b]) <= ftol && spread <= xtol) break;
        const Eigen::Vector2d c = 0.5 * (s.x[b] + s.x[m]);
        const Eigen::Vector2d xr = c + (c - s.x[w]);
        const double fr = fn(xr);
        ++evals;
        if (fr < s.f[b]) {
            const Eigen::Vector2d xe = c + 2.0 * (c - s.x[w]);
            const double fe = fn(xe);
            ++evals;
            if (fe < fr) {
                s.x[w] = xe;
                s.f[w] = fe;
            } else {
                s.x[w] = xr;
                s.f[w] = fr;
            }
        } else if (fr < s.f[m]) {
            s.x[w] = xr;
            s.f[w] = fr;
        } else {
            const bool outside = fr < s.f[w];
            const Eigen::Vector2d xc = outside ? Eigen::Vector2d(c + 0.5 * (xr - c)) : Eigen::Vector2d(c + 0.5 * (s.x[w] - c));
            const double fc = fn(xc);
            ++evals;
            if (fc < std::min(fr, s.f[w])) {
                s.x[w] = xc;
                s.f[w] = fc;
            } else {
                for (auto k : {m, w}) {
                    s.x[k] = s.x[b] + 0.5 * (s.x[k] - s.x[b]);
                    s.f[k] = fn(s.x[k]);
                    ++evals;
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(s.f.begin(), s.f.end()) - s.f.begin());
    return {s.x[best], s.f[best]};
}

} // namespace

QfiMatrix qfi_matrix(const DensityMatrix& rho) {
    require_single_mode(rho.space(), "qfi_matrix");
    Matrix v = rho.matrix();
    const Eigen::VectorXd lambda = detail::zheevd_inplace(v);
    const auto [r1, r2] = quadratures(v.rows());
    const Matrix r1e = v.adjoint() * r1 * v;
    const Matrix r2e = v.adjoint() * r2 * v;
    QfiMatrix q;
    q.entries = kernels::omp::qfi_pair_sum(lambda, r1e, r2e, kPairFloor);
    q.entries = 0.5 * (q.entries + q.entries.transpose()).eval();
    return q;
}

QfiMatrix qfi_pure_covariance(const StateVector& psi) {
    require_single_mode(psi.space(), "qfi_pure_covariance");
    const auto [r1, r2] = quadratures(static_cast<Eigen::Index>(psi.dim()));
    const Vector& v = psi.amplitudes();
    const std::array<const Matrix*, 2> r{&r1, &r2};
    QfiMatrix q;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const Matrix& rk = *r[static_cast<std::size_t>(k)];
            const Matrix& rl = *r[static_cast<std::size_t>(l)];
            const double sym = 0.5 * v.dot((rk * rl + rl * rk) * v).real();
            const double mk = v.dot(rk * v).real();
            const double ml = v.dot(rl * v).real();
            q.entries(k, l) = 2.0 * (sym - mk * ml);
        }
    return q;
}

double metrological_power(const QfiMatrix& f) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f.entries, Eigen::EigenvaluesOnly);
    return std::max((es.eigenvalues()(1) - 1.0) / 2.0, 0.0);
}

double metrological_power(const DensityMatrix& rho) { return metrological_power(qfi_matrix(rho)); }

MeasurementAxis canonical_axis(MeasurementAxis axis) {
    double theta = std::fmod(axis.theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    double phi = axis.phi;
    if (theta > kPi) {
        theta = 2.0 * kPi - theta;
        phi += kPi;
    }
    if (theta > kPi / 2.0) {
        theta = kPi - theta;
        phi += kPi;
    }
    phi = wrap_2pi(phi);
    // The equator is its own mirror image; fold it onto phi in [0, pi).
    if (std::abs(theta - kPi / 2.0) < 1e-6 && phi >= kPi) {
        theta = kPi - theta;
        phi -= kPi;
    }
    if (theta == 0.0) phi = 0.0;
    return {theta, phi};
}

double axis_distance(MeasurementAxis a, MeasurementAxis b) {
    const Eigen::Vector3d u = unit_vector(a), v = unit_vector(b);
    return std::atan2(u.cross(v).norm(), std::abs(u.dot(v)));
}

std::array<Outcome, 2> qubit_measure(const DensityMatrix& rho_qr, MeasurementAxis axis) {
    const auto& subs = rho_qr.space().subsystems();
    if (subs.size() != 2 || subs[0].dim != 2) throw LabelError("qubit_measure needs a (qubit, resonator) state");
    const Eigen::Vector3d n = unit_vector(axis);
    const auto dim = static_cast<Eigen::Index>(subs[1].dim);
    const Matrix& rho = rho_qr.matrix();
    const SpaceLabel res_space({subs[1]});
    std::array<Outcome, 2> out;
    for (int s = 0; s < 2; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        // P = (I + sign n.sigma)/2
        Eigen::Matrix2cd p;
        p(0, 0) = 0.5 * (1.0 + sign * n(2));
        p(1, 1) = 0.5 * (1.0 - sign * n(2));
        p(0, 1) = 0.5 * sign * cplx(n(0), -n(1));
        p(1, 0) = 0.5 * sign * cplx(n(0), n(1));
        Matrix red = Matrix::Zero(dim, dim);
        for (int q = 0; q < 2; ++q)
            for (int qp = 0; qp < 2; ++qp) red += p(q, qp) * rho.block(qp * dim, q * dim, dim, dim);
        red = 0.5 * (red + red.adjoint()).eval();
        Outcome& o = out[static_cast<std::size_t>(s)];
        o.eigenvalue = s == 0 ? 1 : -1;
        o.probability = std::max(red.trace().real(), 0.0);
        if (o.probability >= kOutcomeFloor) o.state = DensityMatrix(res_space, red / o.probability);
    }
    return out;
}

double average_mp(const DensityMatrix& rho_qr, MeasurementAxis axis) {
    double acc = 0.0;
    for (const auto& o : qubit_measure(rho_qr, axis))
        if (o.state) acc += o.probability * metrological_power(*o.state);
    return acc;
}

MetrologyReport optimize_axis(const DensityMatrix& rho_qr, const OptimizeOptions& opt) {
    const std::size_t nt = opt.grid_theta;
    const std::size_t np = opt.grid_phi;
    // n and -n give the same average, so the upper hemisphere suffices.
    const auto theta_at = [nt](std::size_t i) { return 0.5 * kPi * static_cast<double>(i) / static_cast<double>(nt - 1); };
    const auto phi_at = [np](std::size_t j) { return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(np); };
    const std::vector<double> grid = kernels::omp::grid_map(nt * np, [&](std::size_t k) {
        return average_mp(rho_qr, {theta_at(k / np), phi_at(k % np)});
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (grid[k] > grid[best]) best = k;

    MetrologyReport rep;
    rep.evaluations = static_cast<int>(grid.size());
    rep.grid_axis = {theta_at(best / np), phi_at(best % np)};
    rep.grid_mp = grid[best];

    int evals = 0;
    const auto neg = [&rho_qr](const Eigen::Vector2d& v) { return -average_mp(rho_qr, {v(0), v(1)}); };
    const Eigen::Vector2d start(rep.grid_axis.theta, rep.grid_axis.phi);
    const Eigen::Vector2d step(kPi / static_cast<double>(nt - 1), 2.0 * kPi / static_cast<double>(np));
    const auto [xbest, fbest] = nelder_mead(neg, start, step, opt.ftol, opt.xtol, opt.max_evaluations, evals);
    rep.evaluations += evals;
    if (-fbest >= rep.grid_mp) {
        rep.mp = -fbest;
        rep.axis = canonical_axis({xbest(0), xbest(1)});
    } else {
        rep.mp = rep.grid_mp;
        rep.axis = canonical_axis(rep.grid_axis);
    }
    rep.grid_axis = canonical_axis(rep.grid_axis);
    rep.degenerate = rep.mp < 1e-10;
    for (const auto& o : qubit_measure(rho_qr, rep.axis))
        rep.per_outcome.push_back({o.probability, o.state ? metrological_power(*o.state) : 0.0});
    return rep;
}

std::vector<double> wigner(const DensityMatrix& rho, std::span<const cplx> points) {
    require_single_mode(rho.space(), "wigner");
    return kernels::omp::wigner_field(rho.matrix(), points);
}

WignerGrid wigner_grid(const DensityMatrix& rho, double half_width, std::size_t points_per_axis) {
    if (points_per_axis < 2) throw DomainError("wigner grid needs at least 2 points per axis");
    if (!(half_width > 0.0)) throw DomainError("wigner grid half-width must be > 0");
    WignerGrid g;
    for (std::size_t i = 0; i < points_per_axis; ++i) {
        const double u = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(points_per_axis - 1);
        g.xs.push_back(u);
        g.ps.push_back(u);
    }
    std::vector<cplx> pts;
    pts.reserve(points_per_axis * points_per_axis);
    for (double x : g.xs)
        for (double p : g.ps) pts.emplace_back(x, p);
    g.values = wigner(rho, pts);
    return g;
}

void write_wigner_csv(std::ostream& os, const WignerGrid& grid) {
    os << "x,p,W\n";
    char buf[96];
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
        for (std::size_t j = 0; j < grid.ps.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", grid.xs[i], grid.ps[j],
                          grid.values[i * grid.ps.size() + j]);
            os << buf;
        }
}

} // namespace dsc
