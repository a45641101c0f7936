// Serial reference loops against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include "dsc/kernels.hpp"

#include <benchmark/benchmark.h>

#include <array>
#include <random>

namespace {

using dsc::kernels::cplx;
namespace serial = dsc::kernels::serial;
namespace omp = dsc::kernels::omp;

Eigen::MatrixXcd random_density(Eigen::Index n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

// Qubit x resonator x three bath modes, the shape of the diagonalization runs.
const std::array<std::size_t, 5> kDims{2, 14, 3, 3, 3};
const std::array<bool, 5> kKeep{true, true, false, false, false};

template <bool Omp>
void BM_PartialTrace(benchmark::State& state) {
    const Eigen::MatrixXcd rho = random_density(2 * 14 * 27);
    for (auto _ : state) {
        Eigen::MatrixXcd r = Omp ? omp::partial_trace(rho, kDims, kKeep) : serial::partial_trace(rho, kDims, kKeep);
        benchmark::DoNotOptimize(r.data());
    }
}

template <bool Omp>
void BM_AddLocalTerm(benchmark::State& state) {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(14, 14);
    const Eigen::MatrixXcd b = Eigen::MatrixXcd::Random(3, 3);
    const std::array<dsc::kernels::LocalFactor, 2> f{{{1, &a}, {3, &b}}};
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * 14 * 27, 2 * 14 * 27);
    for (auto _ : state) {
        if (Omp) omp::add_local_term(h, kDims, f, 0.5);
        else serial::add_local_term(h, kDims, f, 0.5);
        benchmark::ClobberMemory();
    }
}

template <bool Omp>
void BM_QfiPairSum(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0) / (0.5 * static_cast<double>(n));
    const Eigen::MatrixXcd r1 = Eigen::MatrixXcd::Random(n, n);
    const Eigen::MatrixXcd r2 = Eigen::MatrixXcd::Random(n, n);
    for (auto _ : state) {
        Eigen::Matrix2d f = Omp ? omp::qfi_pair_sum(lambda, r1, r2, 1e-12) : serial::qfi_pair_sum(lambda, r1, r2, 1e-12);
        benchmark::DoNotOptimize(f.data());
    }
}

template <bool Omp>
void BM_WignerField(benchmark::State& state) {
    const Eigen::MatrixXcd rho = random_density(40);
    std::vector<cplx> pts;
    const int side = static_cast<int>(state.range(0));
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) pts.emplace_back(-3.0 + 6.0 * i / (side - 1), -3.0 + 6.0 * j / (side - 1));
    for (auto _ : state) {
        auto w = Omp ? omp::wigner_field(rho, pts) : serial::wigner_field(rho, pts);
        benchmark::DoNotOptimize(w.data());
    }
}

} // namespace

BENCHMARK_TEMPLATE(BM_PartialTrace, false)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_PartialTrace, true)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_AddLocalTerm, false)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_AddLocalTerm, true)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_QfiPairSum, false)->Arg(64)->Arg(256);
BENCHMARK_TEMPLATE(BM_QfiPairSum, true)->Arg(64)->Arg(256);
BENCHMARK_TEMPLATE(BM_WignerField, false)->Arg(21)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_WignerField, true)->Arg(21)->Arg(61)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
