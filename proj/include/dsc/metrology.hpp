// metrology.hpp: quadrature quantum Fisher information, metrological power,
// qubit-conditioned measurements and Wigner functions of resonator states.
//
// Quadratures R1 = (a + a^dag)/sqrt(2), R2 = (a - a^dag)/(sqrt(2) i).
// F is normalized so that every coherent state has F = identity; for a pure
// state F_kl = 2 (<{R_k, R_l}>/2 - <R_k><R_l>).

#pragma once

#include "dsc/hilbert.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dsc {

inline constexpr double kPairFloor = 1e-12;
inline constexpr double kOutcomeFloor = 1e-14;

struct QfiMatrix {
    Eigen::Matrix2d entries{Eigen::Matrix2d::Zero()};
};

// rho on a single resonator subsystem.
QfiMatrix qfi_matrix(const DensityMatrix& rho);
// Pure-state covariance route, independent of the spectral sum.
QfiMatrix qfi_pure_covariance(const StateVector& psi);

double metrological_power(const QfiMatrix& f);  // max((lambda_max - 1)/2, 0)
double metrological_power(const DensityMatrix& rho);

struct MeasurementAxis {
    double theta{0.0};  // [0, pi]
    double phi{0.0};    // [0, 2 pi)
};

// Representative of {n, -n}: theta <= pi/2, and phi in [0, pi) on the equator.
MeasurementAxis canonical_axis(MeasurementAxis axis);

// Angle between the measurement lines of two axes, in [0, pi/2].
double axis_distance(MeasurementAxis a, MeasurementAxis b);

struct Outcome {
    int eigenvalue{1};                   // +1 or -1
    double probability{0.0};
    std::optional<DensityMatrix> state;  // empty when probability < kOutcomeFloor
};

// Projective measurement of sigma_{theta,phi} on the qubit of a
// (qubit, resonator) state; returns the renormalized resonator post-states.
std::array<Outcome, 2> qubit_measure(const DensityMatrix& rho_qr, MeasurementAxis axis);

double average_mp(const DensityMatrix& rho_qr, MeasurementAxis axis);

struct OutcomeMp {
    double probability{0.0};
    double mp{0.0};
};

struct MetrologyReport {
    double mp{0.0};
    MeasurementAxis axis;
    std::vector<OutcomeMp> per_outcome;
    double grid_mp{0.0};
    MeasurementAxis grid_axis;
    bool degenerate{false};  // mp below 1e-10: the axis carries no information
    int evaluations{0};
};

struct OptimizeOptions {
    std::size_t grid_theta{9};   // over [0, pi/2]
    std::size_t grid_phi{16};    // over [0, 2 pi)
    double ftol{1e-12};
    double xtol{1e-9};
    int max_evaluations{2000};
};

// Coarse grid (ties to the smallest (theta, phi)) followed by a Nelder-Mead
// refinement from the best grid node.
MetrologyReport optimize_axis(const DensityMatrix& rho_qr, const OptimizeOptions& opt = {});

// W(beta) = (2/pi) tr[rho D(beta) P D(-beta)], P the photon parity, beta = x + i p.
std::vector<double> wigner(const DensityMatrix& rho, std::span<const cplx> points);

struct WignerGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    std::vector<double> values;  // values[i * ps.size() + j] = W(xs[i] + i ps[j])
};

WignerGrid wigner_grid(const DensityMatrix& rho, double half_width, std::size_t points_per_axis);

// CSV with header "x,p,W"; floats as %.16e.
void write_wigner_csv(std::ostream& os, const WignerGrid& grid);

} // namespace dsc
