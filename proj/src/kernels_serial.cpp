#include "dsc/kernels.hpp"

#include "kernels_detail.hpp"

namespace dsc::kernels::serial {

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, std::span<const std::size_t> dims,
                               std::span<const bool> keep) {
    const auto tt = detail::trace_table(dims, keep);
    const auto nk = static_cast<Eigen::Index>(tt.n_kept);
    Eigen::MatrixXcd out(nk, nk);
    for (Eigen::Index a = 0; a < nk; ++a) {
        const std::size_t* ra = &tt.full_index[static_cast<std::size_t>(a) * tt.n_traced];
        for (Eigen::Index b = 0; b < nk; ++b) {
            const std::size_t* rb = &tt.full_index[static_cast<std::size_t>(b) * tt.n_traced];
            cplx s = 0.0;
            for (std::size_t t = 0; t < tt.n_traced; ++t)
                s += rho(static_cast<Eigen::Index>(ra[t]), static_cast<Eigen::Index>(rb[t]));
            out(a, b) = s;
        }
    }
    return out;
}

void add_local_term(Eigen::MatrixXcd& h, std::span<const std::size_t> dims,
                    std::span<const LocalFactor> factors, cplx coeff) {
    const auto strides = detail::strides_of(dims);
    const auto n = static_cast<std::size_t>(h.rows());
    std::vector<std::size_t> fdims;
    std::size_t combos = 1;
    for (const auto& f : factors) {
        fdims.push_back(dims[f.index]);
        combos *= dims[f.index];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t base = i;
        std::vector<std::size_t> row_local(factors.size());
        for (std::size_t q = 0; q < factors.size(); ++q) {
            const std::size_t s = factors[q].index;
            row_local[q] = (i / strides[s]) % dims[s];
            base -= row_local[q] * strides[s];
        }
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t rem = c;
            std::size_t j = base;
            cplx v = coeff;
            for (std::size_t q = factors.size(); q-- > 0;) {
                const std::size_t col_local = rem % fdims[q];
                rem /= fdims[q];
                v *= (*factors[q].op)(static_cast<Eigen::Index>(row_local[q]),
                                      static_cast<Eigen::Index>(col_local));
                j += col_local * strides[factors[q].index];
            }
            if (v != cplx(0.0)) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
        }
    }
}

Eigen::Matrix2d qfi_pair_sum(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& r1,
                             const Eigen::MatrixXcd& r2, double pair_floor) {
    const Eigen::Index n = lambda.size();
    std::vector<Eigen::Matrix2d> rows(static_cast<std::size_t>(n), Eigen::Matrix2d::Zero());
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
        for (Eigen::Index j = 0; j < n; ++j) {
            const double sum = lambda(i) + lambda(j);
            if (sum <= pair_floor) continue;
            const double d = lambda(i) - lambda(j);
            const double w = d * d / sum;
            acc(0, 0) += w * (r1(i, j) * r1(j, i)).real();
            acc(0, 1) += w * (r1(i, j) * r2(j, i)).real();
            acc(1, 0) += w * (r2(i, j) * r1(j, i)).real();
            acc(1, 1) += w * (r2(i, j) * r2(j, i)).real();
        }
        rows[static_cast<std::size_t>(i)] = acc;
    }
    Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
    for (const auto& r : rows) f += r;
    return f;
}

std::vector<double> wigner_field(const Eigen::MatrixXcd& rho, std::span<const cplx> points) {
    std::vector<double> out(points.size());
    Eigen::MatrixXcd scratch;
    for (std::size_t p = 0; p < points.size(); ++p) out[p] = detail::wigner_point(rho, points[p], scratch);
    return out;
}

std::vector<double> grid_map(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

} // namespace dsc::kernels::serial
