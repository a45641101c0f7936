// hilbert.hpp: truncated Fock-space linear algebra on labeled tensor-product spaces.
//
// Every operator, state and density matrix carries a SpaceLabel: the ordered
// list of (name, dim) subsystems whose Kronecker product it lives on. Basis
// indices follow the declared order with the last subsystem varying fastest.
// Throughout the project the order is (qubit, resonator, mode_1, ..., mode_M).
// Storage is dense; the largest matrix in scope is a few thousand square.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dsc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;

struct Subsystem {
    std::string name;
    std::size_t dim{0};
    bool operator==(const Subsystem&) const = default;
};

class SpaceLabel {
public:
    SpaceLabel() = default;
    explicit SpaceLabel(std::vector<Subsystem> subsystems);

    static SpaceLabel single(std::string name, std::size_t dim);

    const std::vector<Subsystem>& subsystems() const noexcept { return subs_; }
    std::size_t size() const noexcept { return subs_.size(); }
    std::size_t total_dim() const noexcept;
    std::vector<std::size_t> dims() const;
    std::optional<std::size_t> index_of(std::string_view name) const noexcept;

    // Concatenation for tensor products; throws LabelError on a name collision.
    SpaceLabel concat(const SpaceLabel& other) const;

    bool operator==(const SpaceLabel&) const = default;

private:
    std::vector<Subsystem> subs_;
};

std::string to_string(const SpaceLabel& space);

class Operator {
public:
    Operator() = default;
    // hermitian = true asserts max|A - A^dag| < kHermitianTol (checked).
    Operator(SpaceLabel space, Matrix entries, bool hermitian = false);

    const SpaceLabel& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return m_; }
    bool is_hermitian() const noexcept { return hermitian_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

    Operator adjoint() const;

private:
    SpaceLabel space_;
    Matrix m_;
    bool hermitian_{false};
};

class StateVector {
public:
    StateVector() = default;
    // Requires | ||amplitudes|| - 1 | < kNormTol.
    StateVector(SpaceLabel space, Vector amplitudes);

    // Rescales to unit norm first; throws DomainError on a zero vector.
    static StateVector normalized(SpaceLabel space, Vector amplitudes);

    const SpaceLabel& space() const noexcept { return space_; }
    const Vector& amplitudes() const noexcept { return v_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }

private:
    SpaceLabel space_;
    Vector v_;
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    // Checks unit trace, hermiticity and the positivity floor.
    DensityMatrix(SpaceLabel space, Matrix entries);

    static DensityMatrix from_pure(const StateVector& psi);

    const SpaceLabel& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

    double purity() const;
    cplx expectation(const Operator& op) const;

private:
    SpaceLabel space_;
    Matrix m_;
};

// --- elementary operators -------------------------------------------------

// (a, a^dag) on a dim-level truncation; a|n> = sqrt(n)|n-1>.
std::pair<Operator, Operator> ladder_ops(std::size_t dim, std::string name = "resonator");
Operator number_op(std::size_t dim, std::string name = "resonator");
Operator identity_op(const SpaceLabel& space);
Operator pauli_x(std::string name = "qubit");
Operator pauli_y(std::string name = "qubit");
Operator pauli_z(std::string name = "qubit");

// exp(alpha a^dag - alpha* a) of the truncated generator, via the
// eigendecomposition of the hermitian matrix i*(generator). Exactly unitary
// up to rounding; agrees with the infinite-dimensional D(alpha) on low Fock
// states when dim >= |alpha|^2 + 6|alpha| + 10.
Operator displacement_op(cplx alpha, std::size_t dim, std::string name = "resonator");

// Fock amplitudes exp(-|a|^2/2) a^n / sqrt(n!) truncated and renormalized.
StateVector coherent_state(cplx alpha, std::size_t dim, std::string name = "resonator");

StateVector fock_state(std::size_t n, std::size_t dim, std::string name = "resonator");

// <m|D(gamma)|n> of the untruncated displacement operator for m < rows, n < cols.
Matrix displacement_matrix_elements(cplx gamma, std::size_t rows, std::size_t cols);

// Recommended truncation for a coherent amplitude |alpha|.
std::size_t recommended_dim(double abs_alpha);

// --- composition ----------------------------------------------------------

Operator tensor(std::span<const Operator> ops);
Operator tensor(std::initializer_list<Operator> ops);
StateVector tensor(std::span<const StateVector> states);
StateVector tensor(std::initializer_list<StateVector> states);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Trace out every subsystem not named in `keep`; kept subsystems stay in
// their original order. Unknown names raise LabelError.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep);
// Same, starting from a pure state without forming the full projector.
DensityMatrix partial_trace(const StateVector& psi, std::span<const std::string> keep);

// Embed a single-subsystem operator into `space` (identity elsewhere).
Operator embed(const Operator& local, const SpaceLabel& space);

StateVector apply(const Operator& op, const StateVector& psi);
cplx inner(const StateVector& bra, const StateVector& ket);
cplx matrix_element(const StateVector& bra, const Operator& op, const StateVector& ket);

// --- spectra --------------------------------------------------------------

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns, orthonormal
};

// Full decomposition of a hermitian operator (LAPACK zheevd). Throws
// ContractError unless the operator carries the hermitian flag.
EigenSystem hermitian_eig(const Operator& op);

// The `count` lowest eigenpairs (LAPACK zheevr, index range).
EigenSystem lowest_eigenpairs(const Operator& op, std::size_t count);

// Max-norm helpers used by invariants and tests.
double hermiticity_defect(const Matrix& m);
double unitarity_defect(const Matrix& m);

} // namespace dsc
