#include "lapack.hpp"

#include "dsc/errors.hpp"

#include <string>

namespace dsc::detail {

Eigen::VectorXd zheevd_inplace(Eigen::MatrixXcd& a) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0) throw Error("zheevd failed, info = " + std::to_string(info));
    return w;
}

void zheevr_lowest(const Eigen::MatrixXcd& a, Eigen::Index count, Eigen::VectorXd& values,
                   Eigen::MatrixXcd& vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXcd work = a;
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd z(n, count);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0, 1,
                                           static_cast<lapack_int>(count), 0.0, &found, w.data(), z.data(), n,
                                           isuppz.data());
    if (info != 0 || found != count) throw Error("zheevr failed, info = " + std::to_string(info));
    values = w.head(count);
    vectors = std::move(z);
}

} // namespace dsc::detail
