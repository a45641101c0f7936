// diag.hpp: exact diagonalization of the truncated qubit-resonator-waveguide
// Hamiltonian and analysis of its ground state.
//
// Subsystem order is (qubit, resonator, mode_1, ..., mode_M), modes in the
// order of EnvSpectrum::modes.

#pragma once

#include "dsc/cvs.hpp"
#include "dsc/environment.hpp"
#include "dsc/hilbert.hpp"
#include "dsc/rabi.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dsc {

inline constexpr std::size_t kMaxDenseDim = 20000;

struct TruncationSpec {
    std::size_t resonator_dim{14};
    std::vector<std::size_t> mode_dims;

    void validate() const;  // throws DimensionError
    std::size_t total_dim() const;
};

SpaceLabel total_space(const TruncationSpec& t);
std::string mode_name(std::size_t k);  // "mode_1", "mode_2", ...

// H_S + sum_k omega_k b_k^dag b_k + H_SE. Inductive waveguide coupling adds
// xi_k X_I (b_k + b_k^dag), capacitive adds -xi_k (a - a^dag)(b_k - b_k^dag).
// Throws SizeError above kMaxDenseDim.
Operator assemble_total(const ModelParams& model, const EnvSpectrum& env, const TruncationSpec& trunc);

struct GroundState {
    double energy{0.0};
    StateVector ground;
    double gap{0.0};              // E_1 - E_0
    double spectral_range{0.0};   // Gershgorin estimate of E_max - E_0
    double residual{0.0};         // max |H v - E v|
    bool near_degenerate{false};  // gap < 1e-10 spectral_range
};

GroundState ground_state(const Operator& h);

// Trace out every mode subsystem.
DensityMatrix reduce_to_qr(const StateVector& ground);

struct StateLabel {
    unsigned n{0};
    Sign sign{Sign::minus};
    auto operator<=>(const StateLabel&) const = default;
};

std::string to_string(const StateLabel& l);  // "0minus", "1plus", ...

using Fractions = std::map<StateLabel, double>;

// <phi_n^(s)(alpha)| rho_qr |phi_n^(s)(alpha)> with the approximate eigenstates.
Fractions excited_fractions(const DensityMatrix& rho_qr, cplx alpha, std::span<const StateLabel> labels);

// Same populations in the exact eigenbasis of H_S (same resonator truncation
// as rho_qr); each label takes the eigenvector of largest overlap with the
// approximate state at alpha = g/omega_r.
Fractions exact_fractions(const DensityMatrix& rho_qr, const ModelParams& model, std::span<const StateLabel> labels);

// <psi| sigma_x (x) (-1)^{a^dag a} (x) prod_k (-1)^{b_k^dag b_k} |psi>.
double total_parity(const StateVector& psi);

struct GroundReport {
    GroundState gs;
    DensityMatrix rho_qr;
    Fractions fractions;
};

// --- binary dump -------------------------------------------------------------
//
// Little-endian layout:
//   char[8]  magic "DSCDUMP1"
//   u32      subsystem count m
//   u64[m]   subsystem dims, in space order
//   u32      qubit-resonator coupling (0 inductive, 1 capacitive)
//   u32      resonator-waveguide coupling (0 inductive, 1 capacitive)
//   u64      total dimension n
//   f64[2n^2] H, row-major, (re, im) pairs
//   f64[2n]   ground vector, (re, im) pairs

struct DumpContents {
    std::vector<std::uint64_t> dims;
    Coupling qr_coupling{Coupling::inductive};
    Coupling rw_coupling{Coupling::inductive};
    Matrix h;
    Vector ground;
};

void write_dump(const std::filesystem::path& path, const Operator& h, const StateVector& ground, Coupling qr,
                Coupling rw);
DumpContents read_dump(const std::filesystem::path& path);

} // namespace dsc
