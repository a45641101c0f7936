// Index bookkeeping shared by the serial and OpenMP kernels.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace dsc::kernels::detail {

inline std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

// full_index[a * n_traced + t] = basis index of (kept multi-index a, traced multi-index t).
struct TraceTable {
    std::size_t n_kept{1};
    std::size_t n_traced{1};
    std::vector<std::size_t> full_index;
};

inline TraceTable trace_table(std::span<const std::size_t> dims, std::span<const bool> keep) {
    TraceTable tt;
    std::vector<std::size_t> kept_dims, traced_dims, kept_pos, traced_pos;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
            kept_dims.push_back(dims[k]);
            kept_pos.push_back(k);
            tt.n_kept *= dims[k];
        } else {
            traced_dims.push_back(dims[k]);
            traced_pos.push_back(k);
            tt.n_traced *= dims[k];
        }
    }
    const auto strides = strides_of(dims);
    const auto ks = strides_of(kept_dims);
    const auto ts = strides_of(traced_dims);
    tt.full_index.resize(tt.n_kept * tt.n_traced);
    for (std::size_t a = 0; a < tt.n_kept; ++a) {
        std::size_t base = 0;
        for (std::size_t q = 0; q < kept_dims.size(); ++q)
            base += ((a / ks[q]) % kept_dims[q]) * strides[kept_pos[q]];
        for (std::size_t t = 0; t < tt.n_traced; ++t) {
            std::size_t off = 0;
            for (std::size_t q = 0; q < traced_dims.size(); ++q)
                off += ((t / ts[q]) % traced_dims[q]) * strides[traced_pos[q]];
            tt.full_index[a * tt.n_traced + t] = base + off;
        }
    }
    return tt;
}

// <m|D(gamma)|n>, m, n < n_levels, via the column recurrence
// sqrt(n+1) D_{m,n+1} = sqrt(m) D_{m-1,n} - conj(gamma) D_{m,n}.
inline void displacement_elements(std::complex<double> gamma, Eigen::Index n_levels,
                                  Eigen::MatrixXcd& d) {
    d.resize(n_levels, n_levels);
    const double mag2 = std::norm(gamma);
    std::complex<double> amp = std::exp(-0.5 * mag2);
    for (Eigen::Index m = 0; m < n_levels; ++m) {
        d(m, 0) = amp;
        amp *= gamma / std::sqrt(static_cast<double>(m + 1));
    }
    const std::complex<double> gc = std::conj(gamma);
    for (Eigen::Index n = 0; n + 1 < n_levels; ++n) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(n + 1));
        d(0, n + 1) = -gc * d(0, n) * inv;
        for (Eigen::Index m = 1; m < n_levels; ++m)
            d(m, n + 1) = (std::sqrt(static_cast<double>(m)) * d(m - 1, n) - gc * d(m, n)) * inv;
    }
}

inline double wigner_point(const Eigen::MatrixXcd& rho, std::complex<double> beta, Eigen::MatrixXcd& scratch) {
    const Eigen::Index n = rho.rows();
    displacement_elements(2.0 * beta, n, scratch);
    std::complex<double> acc = 0.0;
    for (Eigen::Index col = 0; col < n; ++col) {
        const double parity = (col % 2 == 0) ? 1.0 : -1.0;
        std::complex<double> s = 0.0;
        for (Eigen::Index m = 0; m < n; ++m) s += rho(col, m) * scratch(m, col);
        acc += parity * s;
    }
    return 2.0 / std::numbers::pi * acc.real();
}

} // namespace dsc::kernels::detail
