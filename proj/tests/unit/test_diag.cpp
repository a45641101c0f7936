#include "dsc/cvs.hpp"
#include "dsc/diag.hpp"
#include "dsc/errors.hpp"

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace dsc;
using namespace dsc::testing;

namespace {

struct Setup {
    ModelParams model;
    EnvSpectrum env;
    TruncationSpec trunc;
};

Setup small_setup(Rng& rng, Coupling qr, Coupling rw, std::size_t modes) {
    Setup s;
    s.model = {1.0, uniform(rng, 0.05, 0.5), uniform(rng, 0.2, 1.2), qr, uniform_size(rng, 4, 8)};
    std::vector<double> omegas;
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k < modes; ++k) {
        omegas.push_back(0.8 * static_cast<double>(k + 1));
        dims.push_back(uniform_size(rng, 2, 3));
    }
    s.env = discretize_modes(uniform(rng, 0.05, 0.4), uniform(rng, 0.5, 4.0), rw, omegas, 0.0, dims);
    s.trunc = {s.model.resonator_dim, dims};
    return s;
}

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

// Kronecker-product assembly of the total Hamiltonian, one term at a time.
Matrix oracle_hamiltonian(const Setup& s) {
    const auto nr = static_cast<Eigen::Index>(s.trunc.resonator_dim);
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    const Matrix a = annihilator(nr);
    const Matrix xq = s.model.qr_coupling == Coupling::inductive ? Matrix(a + a.adjoint())
                                                                 : Matrix(cplx(0, -1) * (a - a.adjoint()));
    std::vector<Eigen::Index> md;
    Eigen::Index env_dim = 1;
    for (std::size_t d : s.trunc.mode_dims) {
        md.push_back(static_cast<Eigen::Index>(d));
        env_dim *= static_cast<Eigen::Index>(d);
    }
    const auto on_mode = [&](std::size_t k, const Matrix& op) {
        Matrix out = Matrix::Identity(1, 1);
        for (std::size_t j = 0; j < md.size(); ++j) out = kron(out, j == k ? op : eye(md[j]));
        return out;
    };
    const Matrix env_id = eye(env_dim);
    Matrix h = s.model.omega_r * kron(kron(eye(2), a.adjoint() * a), env_id) +
               0.5 * s.model.delta * kron(kron(sx, eye(nr)), env_id) + s.model.g * kron(kron(sz, xq), env_id);
    for (std::size_t k = 0; k < md.size(); ++k) {
        const Matrix b = annihilator(md[k]);
        h += s.env.modes[k].omega * kron(eye(2 * nr), on_mode(k, b.adjoint() * b));
        const double xi = s.env.modes[k].xi;
        if (s.env.rw_coupling == Coupling::inductive)
            h += xi * kron(kron(eye(2), a + a.adjoint()), on_mode(k, b + b.adjoint()));
        else  // xi X_C (b - b^dag)/i
            h += xi * kron(kron(eye(2), cplx(0, -1) * (a - a.adjoint())), on_mode(k, cplx(0, -1) * (b - b.adjoint())));
    }
    return h;
}

// sigma_x on the qubit times the photon-number parity of every oscillator.
Matrix oracle_parity(const Setup& s) {
    Matrix p(2, 2);
    p << 0, 1, 1, 0;
    const auto par = [](std::size_t d) {
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t n = 0; n < d; ++n) m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = n % 2 ? -1.0 : 1.0;
        return m;
    };
    p = kron(p, par(s.trunc.resonator_dim));
    for (std::size_t d : s.trunc.mode_dims) p = kron(p, par(d));
    return p;
}

const std::vector<StateLabel> kLabels{{0, Sign::plus}, {0, Sign::minus}, {1, Sign::minus}, {1, Sign::plus}};

} // namespace

TEST_CASE("assembled Hamiltonian equals the Kronecker-product oracle") {
    Rng rng(kSeed + 500);
    for (int trial = 0; trial < 16; ++trial) {
        const Coupling qr = trial % 2 ? Coupling::capacitive : Coupling::inductive;
        const Coupling rw = (trial / 2) % 2 ? Coupling::capacitive : Coupling::inductive;
        const Setup s = small_setup(rng, qr, rw, uniform_size(rng, 0, 3));
        const Operator h = assemble_total(s.model, s.env, s.trunc);
        CHECK(h.is_hermitian());
        CHECK((h.matrix() - oracle_hamiltonian(s)).norm() < 1e-12);
    }
}

TEST_CASE("total Hamiltonian commutes with the joint parity") {
    Rng rng(kSeed + 501);
    for (int trial = 0; trial < 8; ++trial) {
        const Setup s = small_setup(rng, trial % 2 ? Coupling::capacitive : Coupling::inductive,
                                    trial % 4 < 2 ? Coupling::capacitive : Coupling::inductive, 2);
        const Matrix h = assemble_total(s.model, s.env, s.trunc).matrix();
        const Matrix p = oracle_parity(s);
        CHECK((h * p - p * h).norm() < 1e-10);
        const GroundState gs = ground_state(Operator(total_space(s.trunc), h, true));
        CHECK(std::abs(std::abs(total_parity(gs.ground)) - 1.0) < 1e-8);
    }
}

TEST_CASE("assembly guards") {
    Rng rng(kSeed + 502);
    Setup s = small_setup(rng, Coupling::inductive, Coupling::inductive, 2);
    s.model.resonator_dim += 1;
    CHECK_THROWS_AS(assemble_total(s.model, s.env, s.trunc), DimensionError);
    s = small_setup(rng, Coupling::inductive, Coupling::inductive, 2);
    s.trunc.mode_dims.push_back(3);
    CHECK_THROWS_AS(assemble_total(s.model, s.env, s.trunc), DimensionError);
    Setup big = small_setup(rng, Coupling::inductive, Coupling::inductive, 0);
    big.model.resonator_dim = big.trunc.resonator_dim = 12000;
    CHECK_THROWS_AS(assemble_total(big.model, big.env, big.trunc), SizeError);
    CHECK(TruncationSpec{14, {3, 3, 3, 3}}.total_dim() == 2268);
    CHECK_THROWS_AS((TruncationSpec{14, {1}}.validate()), DimensionError);
}

TEST_CASE("ground state: lowest eigenpair with small residual and fixed phase") {
    Rng rng(kSeed + 503);
    for (int trial = 0; trial < 6; ++trial) {
        const Setup s = small_setup(rng, Coupling::inductive, trial % 2 ? Coupling::capacitive : Coupling::inductive, 2);
        const Operator h = assemble_total(s.model, s.env, s.trunc);
        const GroundState gs = ground_state(h);
        const EigenSystem full = hermitian_eig(h);
        CHECK(gs.energy == doctest::Approx(full.values(0)).epsilon(1e-12));
        CHECK(gs.gap == doctest::Approx(full.values(1) - full.values(0)).epsilon(1e-8));
        CHECK(gs.residual < 1e-9);
        CHECK(gs.spectral_range >= full.values(full.values.size() - 1) - full.values(0) - 1e-9);
        Eigen::Index imax = 0;
        gs.ground.amplitudes().cwiseAbs().maxCoeff(&imax);
        CHECK(std::abs(gs.ground.amplitudes()(imax).imag()) < 1e-14);
        CHECK(gs.ground.amplitudes()(imax).real() > 0.0);
    }
}

TEST_CASE("reduced state matches the oracle partial trace") {
    Rng rng(kSeed + 504);
    const Setup s = small_setup(rng, Coupling::inductive, Coupling::inductive, 2);
    const GroundState gs = ground_state(assemble_total(s.model, s.env, s.trunc));
    const DensityMatrix rho = reduce_to_qr(gs.ground);
    const Vector& v = gs.ground.amplitudes();
    const Matrix full = v * v.adjoint();
    std::vector<bool> keep{true, true, false, false};
    CHECK((rho.matrix() - naive_partial_trace(full, total_space(s.trunc).dims(), keep)).norm() < 1e-12);
}

TEST_CASE("closed model: ground state is (0, minus) in the exact basis") {
    ModelParams m{1.0, 0.2, 1.0, Coupling::inductive, 30};
    const GroundState gs = ground_state(build_rabi(m));
    const DensityMatrix rho = DensityMatrix::from_pure(gs.ground);
    const Fractions exact = exact_fractions(rho, m, kLabels);
    CHECK(exact.at({0, Sign::minus}) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(exact.at({0, Sign::plus}) < 1e-10);
    const Fractions approx = excited_fractions(rho, m.g / m.omega_r, kLabels);
    CHECK(approx.at({0, Sign::minus}) > 0.99);
    double sum = 0.0;
    for (const auto& [label, f] : approx) sum += f;
    CHECK(sum <= 1.0 + 1e-10);
    CHECK(to_string(StateLabel{1, Sign::plus}) == "1plus");
}

TEST_CASE("variational bound: CVS energy never undercuts exact diagonalization") {
    Rng rng(kSeed + 505);
    for (int trial = 0; trial < 8; ++trial) {
        const Coupling rw = trial % 2 ? Coupling::capacitive : Coupling::inductive;
        ModelParams model{1.0, uniform(rng, 0.1, 0.3), uniform(rng, 0.3, 1.0), Coupling::inductive, 14};
        const std::vector<double> omegas{5.0 / 6.0, 10.0 / 6.0, 15.0 / 6.0};
        const std::vector<std::size_t> dims{3, 3, 3};
        const double xi0 = uniform(rng, 0.05, 0.3);
        const double cutoff = uniform(rng, 0.5, 4.0);
        const EnvSpectrum env = discretize_modes(xi0, cutoff, rw, omegas, 0.0, dims);
        const GroundState gs = ground_state(assemble_total(model, env, {14, dims}));
        const CvsSolution sol = solve(CvsProblem{model, env, FMode::discrete_sum});
        INFO("delta=" << model.delta << " g=" << model.g << " xi0=" << xi0 << " cutoff=" << cutoff);
        CHECK(sol.energy >= gs.energy - 1e-9);
    }
}

TEST_CASE("binary dump round-trips the Hamiltonian and ground state") {
    Rng rng(kSeed + 506);
    const Setup s = small_setup(rng, Coupling::capacitive, Coupling::inductive, 2);
    const Operator h = assemble_total(s.model, s.env, s.trunc);
    const GroundState gs = ground_state(h);
    const auto path = std::filesystem::temp_directory_path() / "dsc_dump_roundtrip.bin";
    write_dump(path, h, gs.ground, Coupling::capacitive, Coupling::inductive);
    const DumpContents d = read_dump(path);
    std::filesystem::remove(path);
    CHECK(d.h == h.matrix());
    CHECK(d.ground == gs.ground.amplitudes());
    CHECK(d.qr_coupling == Coupling::capacitive);
    CHECK(d.rw_coupling == Coupling::inductive);
    REQUIRE(d.dims.size() == 4);
    CHECK(d.dims[1] == s.trunc.resonator_dim);
    CHECK_THROWS(read_dump(path));
}
