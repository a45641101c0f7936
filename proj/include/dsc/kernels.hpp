// kernels.hpp: the data-parallel inner loops of the toolkit.
//
// Each kernel exists twice with identical signatures: `serial` is the plain
// reference loop, `omp` distributes the outer loop with OpenMP. Module code
// calls the `omp` variants; tests check them against `serial`, and
// bench/bench_kernels.cpp times the pair.
//
// In the `omp` variants every output element is accumulated by exactly one
// thread in the same order as the serial loop, so results are bit-identical
// to `serial` regardless of the thread count.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dsc::kernels {

using cplx = std::complex<double>;

// One factor of a tensor-product term: `op` acts on subsystem `index`.
struct LocalFactor {
    std::size_t index;
    const Eigen::MatrixXcd* op;
};

namespace serial {

// tr over the subsystems with keep[k] == false; dims ordered, last fastest.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, std::span<const std::size_t> dims,
                               std::span<const bool> keep);

// h += coeff * (tensor product of the factors with identities elsewhere).
void add_local_term(Eigen::MatrixXcd& h, std::span<const std::size_t> dims,
                    std::span<const LocalFactor> factors, cplx coeff);

// F_kl = sum over pairs with l_i + l_j > pair_floor of
//        (l_i - l_j)^2 / (l_i + l_j) * Re[(R_k)_ij (R_l)_ji],
// with r1, r2 already rotated into the eigenbasis of rho.
Eigen::Matrix2d qfi_pair_sum(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& r1,
                             const Eigen::MatrixXcd& r2, double pair_floor);

// W(beta) = (2/pi) tr[rho D(2 beta) P] with P the photon parity.
std::vector<double> wigner_field(const Eigen::MatrixXcd& rho, std::span<const cplx> points);

std::vector<double> grid_map(std::size_t n, const std::function<double(std::size_t)>& fn);

} // namespace serial

namespace omp {

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, std::span<const std::size_t> dims,
                               std::span<const bool> keep);
void add_local_term(Eigen::MatrixXcd& h, std::span<const std::size_t> dims,
                    std::span<const LocalFactor> factors, cplx coeff);
Eigen::Matrix2d qfi_pair_sum(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& r1,
                             const Eigen::MatrixXcd& r2, double pair_floor);
std::vector<double> wigner_field(const Eigen::MatrixXcd& rho, std::span<const cplx> points);
std::vector<double> grid_map(std::size_t n, const std::function<double(std::size_t)>& fn);

} // namespace omp

// Threads the `omp` variants will use (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

} // namespace dsc::kernels
