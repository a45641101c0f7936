// rabi.hpp: the quantum Rabi model on (qubit, resonator) and its
// deep-strong-coupling approximate eigenbasis.
//
// Qubit basis: |up> = (1,0), |down> = (0,1). Inductive coupling uses
// X_I = a + a^dag, capacitive coupling X_C = (a - a^dag)/i.

#pragma once

#include "dsc/hilbert.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace dsc {

enum class Coupling { inductive, capacitive };

std::string_view to_string(Coupling c) noexcept;
Coupling parse_coupling(std::string_view text);  // throws DomainError

enum class Sign { plus, minus };

inline constexpr double sign_value(Sign s) noexcept { return s == Sign::plus ? 1.0 : -1.0; }

struct ModelParams {
    double omega_r{1.0};
    double delta{0.2};
    double g{1.0};
    Coupling qr_coupling{Coupling::inductive};
    std::size_t resonator_dim{30};

    void validate() const;  // throws DomainError / DimensionError
};

inline constexpr const char* kQubit = "qubit";
inline constexpr const char* kResonator = "resonator";

SpaceLabel qr_space(std::size_t resonator_dim);

// X_I or X_C on a single resonator subsystem named `name`.
Operator quadrature_op(Coupling c, std::size_t dim, std::string name = kResonator);

// omega_r a^dag a + (delta/2) sigma_x + g sigma_z X on (qubit, resonator).
Operator build_rabi(const ModelParams& p);

// sigma_x (x) (-1)^{a^dag a}.
Operator parity_op(std::size_t resonator_dim);

// L_n(x) by forward recurrence; n > 50 throws RangeError.
double laguerre(unsigned n, double x);

// (|up> D(-alpha)|n> +- |down> D(alpha)|n>)/sqrt(2) on (qubit, resonator).
// The displaced columns are the untruncated matrix elements, each
// renormalized on the truncation, so phi_n^+ and phi_n^- stay orthogonal.
StateVector approx_eigenstate(unsigned n, Sign sign, cplx alpha, std::size_t resonator_dim);

// n omega_r - g^2/omega_r +- (delta/2) e^{-2 a^2} L_n(4 a^2), a = g/omega_r.
double approx_eigenenergy(unsigned n, Sign sign, const ModelParams& p);

// <bra|X|ket>; a single-subsystem X is embedded into the bra's space.
cplx transition_amplitude(const StateVector& bra, const Operator& x, const StateVector& ket);

} // namespace dsc
