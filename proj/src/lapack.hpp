// Thin column-major LAPACKE bindings on Eigen storage.

#pragma once

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

namespace dsc::detail {

// Full spectrum, ascending; `a` is overwritten by the eigenvectors.
Eigen::VectorXd zheevd_inplace(Eigen::MatrixXcd& a);

// Eigenpairs with index 0..count-1, ascending.
void zheevr_lowest(const Eigen::MatrixXcd& a, Eigen::Index count, Eigen::VectorXd& values,
                   Eigen::MatrixXcd& vectors);

} // namespace dsc::detail
