#include "dsc/hilbert.hpp"

#include "dsc/errors.hpp"
#include "dsc/kernels.hpp"
#include "lapack.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <memory>
#include <cmath>
#include <numeric>
#include <set>

namespace dsc {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

void require_same_space(const SpaceLabel& a, const SpaceLabel& b, const char* what) {
    if (!(a == b)) throw LabelError(std::string(what) + ": space mismatch " + to_string(a) + " vs " + to_string(b));
}

std::vector<bool> keep_mask(const SpaceLabel& space, std::span<const std::string> keep) {
    std::vector<bool> mask(space.size(), false);
    for (const auto& name : keep) {
        const auto idx = space.index_of(name);
        if (!idx) throw LabelError("partial_trace: unknown subsystem '" + name + "' in " + to_string(space));
        mask[*idx] = true;
    }
    return mask;
}

SpaceLabel kept_space(const SpaceLabel& space, const std::vector<bool>& mask) {
    std::vector<Subsystem> subs;
    for (std::size_t k = 0; k < space.size(); ++k)
        if (mask[k]) subs.push_back(space.subsystems()[k]);
    return SpaceLabel(std::move(subs));
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

} // namespace

// --- SpaceLabel -----------------------------------------------------------

SpaceLabel::SpaceLabel(std::vector<Subsystem> subsystems) : subs_(std::move(subsystems)) {
    std::set<std::string> seen;
    for (const auto& s : subs_) {
        if (s.dim == 0) throw DimensionError("subsystem '" + s.name + "' has dimension 0");
        if (!seen.insert(s.name).second) throw LabelError("duplicate subsystem name '" + s.name + "'");
    }
}

SpaceLabel SpaceLabel::single(std::string name, std::size_t dim) {
    return SpaceLabel({Subsystem{std::move(name), dim}});
}

std::size_t SpaceLabel::total_dim() const noexcept {
    std::size_t d = 1;
    for (const auto& s : subs_) d *= s.dim;
    return d;
}

std::vector<std::size_t> SpaceLabel::dims() const {
    std::vector<std::size_t> d;
    d.reserve(subs_.size());
    for (const auto& s : subs_) d.push_back(s.dim);
    return d;
}

std::optional<std::size_t> SpaceLabel::index_of(std::string_view name) const noexcept {
    for (std::size_t k = 0; k < subs_.size(); ++k)
        if (subs_[k].name == name) return k;
    return std::nullopt;
}

SpaceLabel SpaceLabel::concat(const SpaceLabel& other) const {
    std::vector<Subsystem> subs = subs_;
    subs.insert(subs.end(), other.subs_.begin(), other.subs_.end());
    return SpaceLabel(std::move(subs));
}

std::string to_string(const SpaceLabel& space) {
    std::string s = "(";
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (k) s += ", ";
        s += space.subsystems()[k].name + ":" + std::to_string(space.subsystems()[k].dim);
    }
    return s + ")";
}

// --- Operator / StateVector / DensityMatrix ------------------------------

Operator::Operator(SpaceLabel space, Matrix entries, bool hermitian)
    : space_(std::move(space)), m_(std::move(entries)), hermitian_(hermitian) {
    const auto n = static_cast<Eigen::Index>(space_.total_dim());
    if (m_.rows() != n || m_.cols() != n)
        throw DimensionError("operator entries are " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                             ", space " + to_string(space_) + " needs " + std::to_string(n));
    if (hermitian_ && hermiticity_defect(m_) >= kHermitianTol)
        throw ContractError("operator flagged hermitian has defect " + std::to_string(hermiticity_defect(m_)));
}

Operator Operator::adjoint() const { return Operator(space_, m_.adjoint(), hermitian_); }

StateVector::StateVector(SpaceLabel space, Vector amplitudes) : space_(std::move(space)), v_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(v_.size()) != space_.total_dim())
        throw DimensionError("state has " + std::to_string(v_.size()) + " amplitudes, space " + to_string(space_) +
                             " needs " + std::to_string(space_.total_dim()));
    if (std::abs(v_.norm() - 1.0) >= kNormTol)
        throw DomainError("state norm " + std::to_string(v_.norm()) + " differs from 1");
}

StateVector StateVector::normalized(SpaceLabel space, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw DomainError("cannot normalize a zero vector");
    return StateVector(std::move(space), amplitudes / n);
}

DensityMatrix::DensityMatrix(SpaceLabel space, Matrix entries) : space_(std::move(space)), m_(std::move(entries)) {
    const auto n = static_cast<Eigen::Index>(space_.total_dim());
    if (m_.rows() != n || m_.cols() != n) throw DimensionError("density matrix shape does not match " + to_string(space_));
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) >= kTraceTol) throw DomainError("density matrix trace " + std::to_string(tr.real()) + " differs from 1");
    if (hermiticity_defect(m_) >= kHermitianTol) throw ContractError("density matrix is not hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol)
        throw DomainError("density matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    const Vector& v = psi.amplitudes();
    return DensityMatrix(psi.space(), hermitize(v * v.adjoint()));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

cplx DensityMatrix::expectation(const Operator& op) const {
    require_same_space(space_, op.space(), "expectation");
    return (m_ * op.matrix()).trace();
}

// --- elementary operators --------------------------------------------------

std::pair<Operator, Operator> ladder_ops(std::size_t dim, std::string name) {
    if (dim < 2) throw DimensionError("ladder operators need dim >= 2, got " + std::to_string(dim));
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    auto space = SpaceLabel::single(std::move(name), dim);
    Matrix ad = a.adjoint();
    return {Operator(space, std::move(a)), Operator(space, std::move(ad))};
}

Operator number_op(std::size_t dim, std::string name) {
    if (dim < 1) throw DimensionError("number operator needs dim >= 1");
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
    return Operator(SpaceLabel::single(std::move(name), dim), std::move(m), true);
}

Operator identity_op(const SpaceLabel& space) {
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    return Operator(space, Matrix::Identity(n, n), true);
}

Operator pauli_x(std::string name) {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return Operator(SpaceLabel::single(std::move(name), 2), std::move(m), true);
}

Operator pauli_y(std::string name) {
    Matrix m(2, 2);
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return Operator(SpaceLabel::single(std::move(name), 2), std::move(m), true);
}

Operator pauli_z(std::string name) {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return Operator(SpaceLabel::single(std::move(name), 2), std::move(m), true);
}

Operator displacement_op(cplx alpha, std::size_t dim, std::string name) {
    auto space = SpaceLabel::single(name, dim);
    if (alpha == cplx(0.0)) return identity_op(space);
    const auto [a, ad] = ladder_ops(dim, name);
    // H = i (alpha a^dag - alpha* a) is hermitian and D = exp(-i H).
    Matrix h = cplx(0.0, 1.0) * (alpha * ad.matrix() - std::conj(alpha) * a.matrix());
    h = hermitize(h);
    const Eigen::VectorXd w = detail::zheevd_inplace(h);
    Vector phase(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phase(k) = std::polar(1.0, -w(k));
    Matrix d = h * phase.asDiagonal() * h.adjoint();
    return Operator(std::move(space), std::move(d));
}

StateVector coherent_state(cplx alpha, std::size_t dim, std::string name) {
    if (dim < 1) throw DimensionError("coherent state needs dim >= 1");
    const auto n = static_cast<Eigen::Index>(dim);
    Vector v(n);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index k = 0; k < n; ++k) {
        v(k) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    return StateVector::normalized(SpaceLabel::single(std::move(name), dim), std::move(v));
}

StateVector fock_state(std::size_t n, std::size_t dim, std::string name) {
    if (n >= dim) throw DimensionError("Fock level " + std::to_string(n) + " outside dim " + std::to_string(dim));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return StateVector(SpaceLabel::single(std::move(name), dim), std::move(v));
}

Matrix displacement_matrix_elements(cplx gamma, std::size_t rows, std::size_t cols) {
    const auto r = static_cast<Eigen::Index>(rows);
    const auto c = static_cast<Eigen::Index>(cols);
    const Eigen::Index n = std::max(r, c);
    Matrix d(n, n);
    const double mag2 = std::norm(gamma);
    cplx amp = std::exp(-0.5 * mag2);
    for (Eigen::Index m = 0; m < n; ++m) {
        d(m, 0) = amp;
        amp *= gamma / std::sqrt(static_cast<double>(m + 1));
    }
    const cplx gc = std::conj(gamma);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(k + 1));
        d(0, k + 1) = -gc * d(0, k) * inv;
        for (Eigen::Index m = 1; m < n; ++m)
            d(m, k + 1) = (std::sqrt(static_cast<double>(m)) * d(m - 1, k) - gc * d(m, k)) * inv;
    }
    return d.topLeftCorner(r, c);
}

std::size_t recommended_dim(double abs_alpha) {
    return static_cast<std::size_t>(std::ceil(abs_alpha * abs_alpha + 6.0 * abs_alpha + 10.0));
}

// --- composition -------------------------------------------------------------

Operator tensor(std::span<const Operator> ops) {
    if (ops.empty()) throw DimensionError("tensor of an empty list");
    SpaceLabel space = ops[0].space();
    Matrix m = ops[0].matrix();
    bool herm = ops[0].is_hermitian();
    for (std::size_t k = 1; k < ops.size(); ++k) {
        space = space.concat(ops[k].space());
        m = kron(m, ops[k].matrix());
        herm = herm && ops[k].is_hermitian();
    }
    return Operator(std::move(space), std::move(m), herm);
}

Operator tensor(std::initializer_list<Operator> ops) { return tensor(std::span<const Operator>(ops.begin(), ops.size())); }

StateVector tensor(std::span<const StateVector> states) {
    if (states.empty()) throw DimensionError("tensor of an empty list");
    SpaceLabel space = states[0].space();
    Vector v = states[0].amplitudes();
    for (std::size_t k = 1; k < states.size(); ++k) {
        space = space.concat(states[k].space());
        v = kron(v, states[k].amplitudes());
    }
    return StateVector::normalized(std::move(space), std::move(v));
}

StateVector tensor(std::initializer_list<StateVector> states) {
    return tensor(std::span<const StateVector>(states.begin(), states.size()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(a.space().concat(b.space()), hermitize(kron(a.matrix(), b.matrix())));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
    const auto mask = keep_mask(rho.space(), keep);
    const auto dims = rho.space().dims();
    const auto raw = std::make_unique<bool[]>(mask.size());
    std::copy(mask.begin(), mask.end(), raw.get());
    const std::span<const bool> keep_span(raw.get(), mask.size());
    Matrix out = kernels::omp::partial_trace(rho.matrix(), dims, keep_span);
    return DensityMatrix(kept_space(rho.space(), mask), hermitize(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep) {
    return partial_trace(rho, std::span<const std::string>(keep.begin(), keep.size()));
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const std::string> keep) {
    const auto mask = keep_mask(psi.space(), keep);
    const auto dims = psi.space().dims();
    // Psi(a, t): kept index a, traced index t; rho = Psi Psi^dag.
    std::size_t nk = 1, nt = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) (mask[k] ? nk : nt) *= dims[k];
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
    Matrix psi_m(static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(nt));
    const Vector& v = psi.amplitudes();
    for (std::size_t i = 0; i < static_cast<std::size_t>(v.size()); ++i) {
        std::size_t a = 0, t = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const std::size_t digit = (i / strides[k]) % dims[k];
            if (mask[k]) a = a * dims[k] + digit;
            else t = t * dims[k] + digit;
        }
        psi_m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(t)) = v(static_cast<Eigen::Index>(i));
    }
    Matrix out = psi_m * psi_m.adjoint();
    return DensityMatrix(kept_space(psi.space(), mask), hermitize(out));
}

Operator embed(const Operator& local, const SpaceLabel& space) {
    if (local.space().size() != 1) throw LabelError("embed expects a single-subsystem operator");
    const auto& sub = local.space().subsystems()[0];
    const auto idx = space.index_of(sub.name);
    if (!idx) throw LabelError("embed: '" + sub.name + "' not in " + to_string(space));
    if (space.subsystems()[*idx].dim != sub.dim) throw LabelError("embed: dimension mismatch for '" + sub.name + "'");
    const auto n = static_cast<Eigen::Index>(space.total_dim());
    Matrix h = Matrix::Zero(n, n);
    const auto dims = space.dims();
    const kernels::LocalFactor f{*idx, &local.matrix()};
    kernels::omp::add_local_term(h, dims, std::span<const kernels::LocalFactor>(&f, 1), 1.0);
    return Operator(space, std::move(h), local.is_hermitian());
}

StateVector apply(const Operator& op, const StateVector& psi) {
    require_same_space(op.space(), psi.space(), "apply");
    return StateVector::normalized(psi.space(), op.matrix() * psi.amplitudes());
}

cplx inner(const StateVector& bra, const StateVector& ket) {
    require_same_space(bra.space(), ket.space(), "inner");
    return bra.amplitudes().dot(ket.amplitudes());
}

cplx matrix_element(const StateVector& bra, const Operator& op, const StateVector& ket) {
    require_same_space(bra.space(), op.space(), "matrix_element");
    require_same_space(op.space(), ket.space(), "matrix_element");
    return bra.amplitudes().dot(op.matrix() * ket.amplitudes());
}

// --- spectra ---------------------------------------------------------------

EigenSystem hermitian_eig(const Operator& op) {
    if (!op.is_hermitian()) throw ContractError("hermitian_eig requires an operator flagged hermitian");
    EigenSystem es;
    es.vectors = op.matrix();
    es.values = detail::zheevd_inplace(es.vectors);
    return es;
}

EigenSystem lowest_eigenpairs(const Operator& op, std::size_t count) {
    if (!op.is_hermitian()) throw ContractError("lowest_eigenpairs requires an operator flagged hermitian");
    if (count == 0 || count > op.dim()) throw DomainError("lowest_eigenpairs: count out of range");
    EigenSystem es;
    detail::zheevr_lowest(op.matrix(), static_cast<Eigen::Index>(count), es.values, es.vectors);
    return es;
}

double hermiticity_defect(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

} // namespace dsc
