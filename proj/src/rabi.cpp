#include "dsc/rabi.hpp"

#include "dsc/errors.hpp"

#include <cmath>

namespace dsc {

std::string_view to_string(Coupling c) noexcept {
    return c == Coupling::inductive ? "inductive" : "capacitive";
}

Coupling parse_coupling(std::string_view text) {
    if (text == "inductive") return Coupling::inductive;
    if (text == "capacitive") return Coupling::capacitive;
    throw DomainError("unknown coupling type '" + std::string(text) + "' (expected inductive|capacitive)");
}

void ModelParams::validate() const {
    if (!(omega_r > 0.0) || !std::isfinite(omega_r)) throw DomainError("omega_r must be > 0");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be >= 0");
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("g must be >= 0");
    if (resonator_dim < 2) throw DimensionError("resonator_dim must be >= 2");
}

SpaceLabel qr_space(std::size_t resonator_dim) {
    return SpaceLabel({Subsystem{kQubit, 2}, Subsystem{kResonator, resonator_dim}});
}

Operator quadrature_op(Coupling c, std::size_t dim, std::string name) {
    const auto [a, ad] = ladder_ops(dim, name);
    Matrix x = (c == Coupling::inductive) ? Matrix(a.matrix() + ad.matrix())
                                          : Matrix(cplx(0.0, -1.0) * (a.matrix() - ad.matrix()));
    return Operator(a.space(), std::move(x), true);
}

Operator build_rabi(const ModelParams& p) {
    p.validate();
    const std::size_t n = p.resonator_dim;
    const Operator id_q = identity_op(SpaceLabel::single(kQubit, 2));
    const Operator id_r = identity_op(SpaceLabel::single(kResonator, n));
    const Operator h_r = tensor({id_q, number_op(n)});
    const Operator h_q = tensor({pauli_x(), id_r});
    const Operator h_int = tensor({pauli_z(), quadrature_op(p.qr_coupling, n)});
    Matrix h = p.omega_r * h_r.matrix() + 0.5 * p.delta * h_q.matrix() + p.g * h_int.matrix();
    h = 0.5 * (h + h.adjoint()).eval();
    return Operator(qr_space(n), std::move(h), true);
}

Operator parity_op(std::size_t resonator_dim) {
    const auto n = static_cast<Eigen::Index>(resonator_dim);
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return tensor({pauli_x(), Operator(SpaceLabel::single(kResonator, resonator_dim), std::move(p), true)});
}

double laguerre(unsigned n, double x) {
    if (n > 50) throw RangeError("laguerre: n = " + std::to_string(n) + " exceeds the stable bound 50");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - x;
    for (unsigned k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

StateVector approx_eigenstate(unsigned n, Sign sign, cplx alpha, std::size_t resonator_dim) {
    if (n >= resonator_dim) throw DimensionError("approx_eigenstate: level outside the truncation");
    const auto dim = static_cast<Eigen::Index>(resonator_dim);
    Vector up = displacement_matrix_elements(-alpha, resonator_dim, n + 1).col(n);
    Vector down = displacement_matrix_elements(alpha, resonator_dim, n + 1).col(n);
    up.normalize();
    down.normalize();
    Vector v(2 * dim);
    v.head(dim) = up / std::sqrt(2.0);
    v.tail(dim) = sign_value(sign) * down / std::sqrt(2.0);
    return StateVector::normalized(qr_space(resonator_dim), std::move(v));
}

double approx_eigenenergy(unsigned n, Sign sign, const ModelParams& p) {
    const double a = p.g / p.omega_r;
    return n * p.omega_r - p.g * p.g / p.omega_r +
           sign_value(sign) * 0.5 * p.delta * std::exp(-2.0 * a * a) * laguerre(n, 4.0 * a * a);
}

cplx transition_amplitude(const StateVector& bra, const Operator& x, const StateVector& ket) {
    if (x.space().size() == 1 && !(x.space() == bra.space())) return matrix_element(bra, embed(x, bra.space()), ket);
    return matrix_element(bra, x, ket);
}

} // namespace dsc
