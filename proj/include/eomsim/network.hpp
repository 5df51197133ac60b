#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "eomsim/params.hpp"

namespace eomsim {

using complexd = std::complex<double>;
using Matrix6cd = Eigen::Matrix<complexd, 6, 6>;
using Matrix6x10cd = Eigen::Matrix<complexd, 6, 10>;
using Matrix10cd = Eigen::Matrix<complexd, 10, 10>;
using Matrix10d = Eigen::Matrix<double, 10, 10>;

// Doubled-operator ordering used throughout.
//   modes: (a, a+, c, c+, b, b+)  = optical, microwave, mechanical
//   ports: (a_in,c, a+_in,c, a_in,i, a+_in,i, c_in,c, c+_in,c,
//           c_in,i, c+_in,i, b_in, b+_in)
// Quadratures follow q = a + a+, p = -i(a - a+), so vacuum variance is 1.

/// Linear Heisenberg-Langevin network of the three-mode transducer.
///
/// `drift` is written in the pump rotating frame with the lab frequencies
/// kept on the microwave and mechanical modes. `drift_sideband` is the
/// co-rotating generator with the fast optomechanical terms dropped; it is
/// what the stationary covariance pipeline inverts, with sideband
/// frequencies measured from the shared output carrier.
struct LinearNetwork {
    Matrix6cd drift;
    Matrix6cd drift_sideband;
    Matrix6x10cd coupling;
    DerivedParams derived;
};

LinearNetwork build_network(const SystemParams& params);

/// Frequency-domain scattering of the doubled operator vector,
/// S_a[w] = N^T (-i w D6 - M)^{-1} N - I10 with D6 = diag(1,-1,...).
struct ScatteringMatrix {
    double omega = 0.0;
    Matrix10cd s_modes; // S_a[w]
    Matrix10cd s_quads; // S_x[w] = Q S_a[w] Q^{-1}
};

ScatteringMatrix scattering(const LinearNetwork& network, double omega);

/// Stationary quadrature spectral covariance of the five output ports at
/// sideband frequency `omega`, vacuum inputs everywhere except the
/// microwave-internal and mechanical baths at occupancy n_ba.
Matrix10d output_covariance(const LinearNetwork& network, double omega, double n_ba);

/// Reduced two-mode output state at one sideband frequency: optical
/// coupling port at -omega paired with the microwave coupling port at
/// +omega, in the standard form diag-blocks (u I2, v I2), cross diag(-w, w).
struct StandardFormState {
    double omega = 0.0;
    double u = 1.0;
    double v = 1.0;
    double w = 0.0;
};

StandardFormState reduce_standard_form(const LinearNetwork& network, double omega, double n_ba);

/// On-resonance closed forms for (u, v, w). Throws when |pdc_margin| < 1e-9,
/// where the expressions diverge.
StandardFormState closed_form_uvw(const DerivedParams& derived, double n_ba);

struct StabilityReport {
    bool stable = false;
    double margin = 0.0; // largest real part over the drift eigenvalues
    double pdc_margin = 0.0;
};

StabilityReport stability(const LinearNetwork& network);

struct SpectrumResult {
    std::vector<double> omega;
    std::vector<double> u;
    std::vector<double> v;
};

SpectrumResult spectrum(const LinearNetwork& network, const std::vector<double>& omega_grid,
                        double n_ba);

/// Uniform grid of `points` sidebands over [-span, +span] (rad/s).
std::vector<double> symmetric_grid(double span, int points);

/// Effective linewidths 2|Re eig| of the co-rotating drift, ascending.
std::vector<double> effective_linewidths(const LinearNetwork& network);

/// 4x4 covariance matrix of the standard form state.
Eigen::Matrix4d standard_form_matrix(const StandardFormState& state);

/// Smallest symplectic eigenvalue of a two-mode quadrature covariance;
/// physical states satisfy >= 1.
double min_symplectic_eigenvalue(const Eigen::Matrix4d& covariance);

} // namespace eomsim
