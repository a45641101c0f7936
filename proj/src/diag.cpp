#include "dsc/diag.hpp"

#include "dsc/errors.hpp"
#include "dsc/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace dsc {

namespace {

static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

constexpr char kMagic[8] = {'D', 'S', 'C', 'D', 'U', 'M', 'P', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("binary dump truncated");
    return v;
}

Matrix ladder_matrix(std::size_t dim) { return ladder_ops(dim, "tmp").first.matrix(); }

Matrix number_matrix(std::size_t dim) { return number_op(dim, "tmp").matrix(); }

} // namespace

void TruncationSpec::validate() const {
    if (resonator_dim < 2) throw DimensionError("resonator_dim must be >= 2");
    for (std::size_t d : mode_dims)
        if (d < 2) throw DimensionError("mode dimensions must be >= 2");
}

std::size_t TruncationSpec::total_dim() const {
    std::size_t n = 2 * resonator_dim;
    for (std::size_t d : mode_dims) n *= d;
    return n;
}

std::string mode_name(std::size_t k) { return "mode_" + std::to_string(k + 1); }

SpaceLabel total_space(const TruncationSpec& t) {
    std::vector<Subsystem> subs{{kQubit, 2}, {kResonator, t.resonator_dim}};
    for (std::size_t k = 0; k < t.mode_dims.size(); ++k) subs.push_back({mode_name(k), t.mode_dims[k]});
    return SpaceLabel(std::move(subs));
}

Operator assemble_total(const ModelParams& model, const EnvSpectrum& env, const TruncationSpec& trunc) {
    model.validate();
    env.validate();
    trunc.validate();
    if (env.modes.size() != trunc.mode_dims.size())
        throw DimensionError("truncation lists " + std::to_string(trunc.mode_dims.size()) + " mode dims for " +
                             std::to_string(env.modes.size()) + " modes");
    if (trunc.resonator_dim != model.resonator_dim)
        throw DimensionError("truncation and model disagree on resonator_dim");
    const std::size_t n = trunc.total_dim();
    if (n > kMaxDenseDim)
        throw SizeError("total dimension " + std::to_string(n) + " exceeds the dense guard " + std::to_string(kMaxDenseDim));

    const SpaceLabel space = total_space(trunc);
    const auto dims = space.dims();
    const auto N = static_cast<Eigen::Index>(n);
    Matrix h = Matrix::Zero(N, N);
    using kernels::LocalFactor;
    const auto add = [&](std::initializer_list<LocalFactor> fs, cplx c) {
        kernels::omp::add_local_term(h, dims, std::span<const LocalFactor>(fs.begin(), fs.size()), c);
    };

    const Matrix sx = pauli_x().matrix();
    const Matrix sz = pauli_z().matrix();
    const Matrix a = ladder_matrix(trunc.resonator_dim);
    const Matrix num_r = number_matrix(trunc.resonator_dim);
    const Matrix x_qr = quadrature_op(model.qr_coupling, trunc.resonator_dim, "tmp").matrix();
    const Matrix a_minus_ad = a - a.adjoint();
    const Matrix x_i = a + a.adjoint();

    add({{1, &num_r}}, model.omega_r);
    add({{0, &sx}}, 0.5 * model.delta);
    add({{0, &sz}, {1, &x_qr}}, model.g);

    for (std::size_t k = 0; k < env.modes.size(); ++k) {
        const std::size_t idx = k + 2;
        const Matrix b = ladder_matrix(trunc.mode_dims[k]);
        const Matrix num_b = number_matrix(trunc.mode_dims[k]);
        add({{idx, &num_b}}, env.modes[k].omega);
        const double xi = env.modes[k].xi;
        if (xi == 0.0) continue;
        if (env.rw_coupling == Coupling::inductive) {
            const Matrix xb = b + b.adjoint();
            add({{1, &x_i}, {idx, &xb}}, xi);
        } else {
            const Matrix yb = b - b.adjoint();
            add({{1, &a_minus_ad}, {idx, &yb}}, -xi);
        }
    }
    h = 0.5 * (h + h.adjoint()).eval();
    return Operator(space, std::move(h), true);
}

GroundState ground_state(const Operator& h) {
    const std::size_t count = std::min<std::size_t>(2, h.dim());
    const EigenSystem es = lowest_eigenpairs(h, count);
    GroundState gs;
    gs.energy = es.values(0);
    gs.gap = count > 1 ? es.values(1) - es.values(0) : std::numeric_limits<double>::infinity();
    const Matrix& m = h.matrix();
    double upper = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double off = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
        upper = std::max(upper, m(i, i).real() + off);
    }
    gs.spectral_range = std::max(upper - gs.energy, 0.0);
    Vector v = es.vectors.col(0);
    // Fix the global phase: largest component real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    gs.residual = (m * v - gs.energy * v).cwiseAbs().maxCoeff();
    gs.near_degenerate = gs.gap < 1e-10 * gs.spectral_range;
    gs.ground = StateVector::normalized(h.space(), std::move(v));
    return gs;
}

DensityMatrix reduce_to_qr(const StateVector& ground) {
    const std::vector<std::string> keep{kQubit, kResonator};
    return partial_trace(ground, keep);
}

std::string to_string(const StateLabel& l) {
    return std::to_string(l.n) + (l.sign == Sign::plus ? "plus" : "minus");
}

Fractions excited_fractions(const DensityMatrix& rho_qr, cplx alpha, std::span<const StateLabel> labels) {
    const auto idx = rho_qr.space().index_of(kResonator);
    if (!idx || rho_qr.space().size() != 2) throw LabelError("excited_fractions needs a (qubit, resonator) state");
    const std::size_t dim = rho_qr.space().subsystems()[*idx].dim;
    Fractions out;
    for (const auto& l : labels) {
        const Vector phi = approx_eigenstate(l.n, l.sign, alpha, dim).amplitudes();
        out[l] = std::clamp(phi.dot(rho_qr.matrix() * phi).real(), 0.0, 1.0);
    }
    return out;
}

Fractions exact_fractions(const DensityMatrix& rho_qr, const ModelParams& model, std::span<const StateLabel> labels) {
    const auto idx = rho_qr.space().index_of(kResonator);
    if (!idx || rho_qr.space().size() != 2) throw LabelError("exact_fractions needs a (qubit, resonator) state");
    ModelParams m = model;
    m.resonator_dim = rho_qr.space().subsystems()[*idx].dim;
    const EigenSystem es = hermitian_eig(build_rabi(m));
    const cplx alpha = model.g / model.omega_r;
    Fractions out;
    for (const auto& l : labels) {
        const Vector phi = approx_eigenstate(l.n, l.sign, alpha, m.resonator_dim).amplitudes();
        Eigen::Index best = 0;
        (es.vectors.adjoint() * phi).cwiseAbs2().maxCoeff(&best);
        const Vector e = es.vectors.col(best);
        out[l] = std::clamp(e.dot(rho_qr.matrix() * e).real(), 0.0, 1.0);
    }
    return out;
}

double total_parity(const StateVector& psi) {
    const auto& subs = psi.space().subsystems();
    if (subs.empty() || subs[0].name != kQubit || subs[0].dim != 2)
        throw LabelError("total_parity needs the qubit as first subsystem");
    const std::size_t n = psi.dim();
    const std::size_t half = n / 2;
    std::vector<std::size_t> strides(subs.size(), 1);
    for (std::size_t k = subs.size(); k-- > 1;) strides[k - 1] = strides[k] * subs[k].dim;
    const Vector& v = psi.amplitudes();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t quanta = 0;
        for (std::size_t k = 1; k < subs.size(); ++k) quanta += (i / strides[k]) % subs[k].dim;
        const double sign = (quanta % 2 == 0) ? 1.0 : -1.0;
        const std::size_t flipped = i < half ? i + half : i - half;
        acc += std::conj(v(static_cast<Eigen::Index>(i))) * sign * v(static_cast<Eigen::Index>(flipped));
    }
    return acc.real();
}

void write_dump(const std::filesystem::path& path, const Operator& h, const StateVector& ground, Coupling qr,
                Coupling rw) {
    if (!(h.space() == ground.space())) throw LabelError("write_dump: operator and state spaces differ");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(kMagic, sizeof kMagic);
    const auto& subs = h.space().subsystems();
    put(os, static_cast<std::uint32_t>(subs.size()));
    for (const auto& s : subs) put(os, static_cast<std::uint64_t>(s.dim));
    put(os, static_cast<std::uint32_t>(qr == Coupling::capacitive));
    put(os, static_cast<std::uint32_t>(rw == Coupling::capacitive));
    const auto n = static_cast<Eigen::Index>(h.dim());
    put(os, static_cast<std::uint64_t>(n));
    const Matrix& m = h.matrix();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            put(os, m(i, j).real());
            put(os, m(i, j).imag());
        }
    for (Eigen::Index i = 0; i < n; ++i) {
        put(os, ground.amplitudes()(i).real());
        put(os, ground.amplitudes()(i).imag());
    }
    if (!os) throw Error("write failed for " + path.string());
}

DumpContents read_dump(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error("not a dump file: " + path.string());
    DumpContents d;
    const auto m = get<std::uint32_t>(is);
    std::uint64_t prod = 1;
    for (std::uint32_t k = 0; k < m; ++k) {
        d.dims.push_back(get<std::uint64_t>(is));
        prod *= d.dims.back();
    }
    d.qr_coupling = get<std::uint32_t>(is) ? Coupling::capacitive : Coupling::inductive;
    d.rw_coupling = get<std::uint32_t>(is) ? Coupling::capacitive : Coupling::inductive;
    const auto n64 = get<std::uint64_t>(is);
    if (n64 != prod || n64 > kMaxDenseDim) throw Error("inconsistent dimension in dump header");
    const auto n = static_cast<Eigen::Index>(n64);
    d.h.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            d.h(i, j) = cplx(re, im);
        }
    d.ground.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        d.ground(i) = cplx(re, im);
    }
    return d;
}

} // namespace dsc
