#include "dsc/cvs.hpp"
#include "dsc/errors.hpp"
#include "dsc/metrology.hpp"

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace dsc;
using namespace dsc::testing;

namespace {

DensityMatrix mode_state(const Matrix& rho) {
    return DensityMatrix(SpaceLabel::single("resonator", static_cast<std::size_t>(rho.rows())), rho);
}

Vector cat(cplx alpha, std::size_t dim, double sign) {
    const Vector v = coherent_amplitudes(alpha, dim) + sign * coherent_amplitudes(-alpha, dim);
    return v / v.norm();
}

} // namespace

TEST_CASE("QFI: spectral route equals the pure-state covariance route") {
    Rng rng(kSeed + 600);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<Eigen::Index>(uniform_size(rng, 2, 30));
        const Vector psi = random_unit_vector(rng, n);
        const StateVector sv(SpaceLabel::single("resonator", static_cast<std::size_t>(n)), psi);
        const Eigen::Matrix2d spectral = qfi_matrix(DensityMatrix::from_pure(sv)).entries;
        const Eigen::Matrix2d cov = qfi_pure_covariance(sv).entries;
        const Eigen::Matrix2d oracle = pure_qfi(psi);
        CHECK((spectral - cov).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((cov - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("QFI of the vacuum is the identity") {
    const DensityMatrix vac = DensityMatrix::from_pure(fock_state(0, 10));
    CHECK((qfi_matrix(vac).entries - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(metrological_power(vac) == 0.0);
}

TEST_CASE("coherent states and their mixtures carry no metrological power") {
    Rng rng(kSeed + 601);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t parts = uniform_size(rng, 1, 4);
        const std::size_t dim = 40;
        Matrix rho = Matrix::Zero(dim, dim);
        double wsum = 0.0;
        for (std::size_t k = 0; k < parts; ++k) {
            const double w = uniform(rng, 0.1, 1.0);
            const Vector c = coherent_state(disk_point(rng, 2.0), dim).amplitudes();
            rho += w * c * c.adjoint();
            wsum += w;
        }
        rho /= wsum;
        CHECK(metrological_power(mode_state(0.5 * (rho + rho.adjoint()))) < 1e-8);
    }
}

TEST_CASE("cat states are metrologically useful") {
    for (double a : {0.5, 1.0, 2.0}) {
        const std::size_t dim = recommended_dim(a) + 10;
        const DensityMatrix even = mode_state(Matrix(cat(a, dim, 1.0) * cat(a, dim, 1.0).adjoint()));
        CHECK(metrological_power(even) > 0.0);
        CHECK(std::abs(qfi_matrix(even).entries(1, 1) - pure_qfi(cat(a, dim, 1.0))(1, 1)) < 1e-8);
    }
}

TEST_CASE("conditional measurement splits the state into normalized branches") {
    Rng rng(kSeed + 602);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = uniform_size(rng, 2, 10);
        const DensityMatrix rho(SpaceLabel({{"qubit", 2}, {"resonator", dim}}),
                                random_density(rng, static_cast<Eigen::Index>(2 * dim)));
        const MeasurementAxis ax{uniform(rng, 0.0, kPi), uniform(rng, 0.0, 2.0 * kPi)};
        const auto out = qubit_measure(rho, ax);
        CHECK(out[0].probability + out[1].probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out[0].eigenvalue == 1);
        CHECK(out[1].eigenvalue == -1);
        for (const auto& o : out) {
            REQUIRE(o.state);
            CHECK(std::abs(o.state->matrix().trace() - 1.0) < 1e-12);
        }
        const auto flipped = qubit_measure(rho, {kPi - ax.theta, ax.phi + kPi});
        CHECK(flipped[0].probability == doctest::Approx(out[1].probability).epsilon(1e-12));
        CHECK(average_mp(rho, ax) == doctest::Approx(average_mp(rho, {kPi - ax.theta, ax.phi + kPi})).epsilon(1e-9));
    }
    CHECK_THROWS_AS(qubit_measure(mode_state(Matrix::Identity(4, 4) / 4.0), {0.0, 0.0}), LabelError);
}

TEST_CASE("canonical axes identify n with -n") {
    Rng rng(kSeed + 603);
    for (int trial = 0; trial < 200; ++trial) {
        const MeasurementAxis ax{uniform(rng, -7.0, 7.0), uniform(rng, -7.0, 7.0)};
        const MeasurementAxis c = canonical_axis(ax);
        CHECK(c.theta >= 0.0);
        CHECK(c.theta <= kPi / 2.0 + 1e-6);
        CHECK(c.phi >= 0.0);
        CHECK(c.phi < 2.0 * kPi);
        CHECK(axis_distance(c, ax) < 1e-9);
        CHECK(axis_distance(c, {kPi - ax.theta, ax.phi + kPi}) < 1e-9);
        const MeasurementAxis cc = canonical_axis(c);
        CHECK(cc.theta == doctest::Approx(c.theta));
        CHECK(cc.phi == doctest::Approx(c.phi));
    }
    const MeasurementAxis y = canonical_axis({kPi / 2, 3 * kPi / 2});
    CHECK(y.theta == doctest::Approx(kPi / 2));
    CHECK(y.phi == doctest::Approx(kPi / 2));
}

TEST_CASE("optimal axis for a zero-temperature cat mixture is sigma_y") {
    Rng rng(kSeed + 604);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = uniform(rng, 0.5, 1.5);
        const double c = uniform(rng, 0.3, 1.0);
        const MetrologyReport rep = optimize_axis(build_zts(a, c, recommended_dim(a)));
        CHECK_FALSE(rep.degenerate);
        CHECK(axis_distance(rep.axis, {kPi / 2, kPi / 2}) < 0.05);
        CHECK(rep.mp >= rep.grid_mp);
        CHECK(rep.per_outcome.size() == 2);
    }
}

TEST_CASE("Wigner function of a coherent state is the displaced Gaussian") {
    Rng rng(kSeed + 605);
    for (int trial = 0; trial < 10; ++trial) {
        const cplx alpha = disk_point(rng, 1.5);
        const std::size_t dim = recommended_dim(std::abs(alpha)) + 15;
        const DensityMatrix rho = DensityMatrix::from_pure(coherent_state(alpha, dim));
        std::vector<cplx> pts;
        for (int k = 0; k < 10; ++k) pts.push_back(alpha + disk_point(rng, 1.0));
        const auto w = wigner(rho, pts);
        for (std::size_t k = 0; k < pts.size(); ++k)
            CHECK(std::abs(w[k] - 2.0 / kPi * std::exp(-2.0 * std::norm(pts[k] - alpha))) < 1e-8);
    }
}

TEST_CASE("odd cats have W(0) = -2/pi and the grid integrates to one") {
    for (double a : {0.7, 1.3, 2.0}) {
        const std::size_t dim = recommended_dim(a) + 10;
        const Vector odd = cat(a, dim, -1.0);
        const DensityMatrix rho = mode_state(Matrix(odd * odd.adjoint()));
        const std::vector<cplx> origin{0.0};
        CHECK(std::abs(wigner(rho, origin)[0] + 2.0 / kPi) < 1e-10);
        const WignerGrid g = wigner_grid(rho, a + 4.0, 121);
        const double h = g.xs[1] - g.xs[0];
        double total = 0.0;
        for (double v : g.values) total += v * h * h;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Wigner CSV layout") {
    const DensityMatrix vac = DensityMatrix::from_pure(fock_state(0, 5));
    const WignerGrid g = wigner_grid(vac, 1.0, 3);
    CHECK(g.values.size() == 9);
    CHECK(g.values[4] == doctest::Approx(2.0 / kPi));
    std::ostringstream os;
    write_wigner_csv(os, g);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,p,W");
    std::getline(is, line);
    CHECK(line.rfind("-1.0000000000000000e+00,-1.0000000000000000e+00,", 0) == 0);
    CHECK_THROWS_AS(wigner_grid(vac, 1.0, 1), DomainError);
}
