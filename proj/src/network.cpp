#include "eomsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eomsim {

namespace {

constexpr complexd ci{0.0, 1.0};

Eigen::Matrix<double, 6, 1> d6_signs() {
    Eigen::Matrix<double, 6, 1> d;
    d << 1, -1, 1, -1, 1, -1;
    return d;
}

// Q = I5 (x) [[1, 1], [-i, i]] maps doubled operators to quadratures.
Matrix10cd quadrature_map() {
    Matrix10cd q = Matrix10cd::Zero();
    for (int k = 0; k < 5; ++k) {
        q(2 * k, 2 * k) = 1.0;
        q(2 * k, 2 * k + 1) = 1.0;
        q(2 * k + 1, 2 * k) = -ci;
        q(2 * k + 1, 2 * k + 1) = ci;
    }
    return q;
}

Matrix10cd quadrature_map_inverse() {
    Matrix10cd q = Matrix10cd::Zero();
    for (int k = 0; k < 5; ++k) {
        q(2 * k, 2 * k) = 0.5;
        q(2 * k, 2 * k + 1) = 0.5 * ci;
        q(2 * k + 1, 2 * k) = 0.5;
        q(2 * k + 1, 2 * k + 1) = -0.5 * ci;
    }
    return q;
}

// Port-pair thermal occupancies: only the microwave-internal and mechanical
// baths are populated.
Eigen::Matrix<double, 5, 1> port_occupancies(double n_ba) {
    Eigen::Matrix<double, 5, 1> n;
    n << 0.0, 0.0, 0.0, n_ba, n_ba;
    return n;
}

Matrix6x10cd sideband_transfer(const LinearNetwork& network, double omega) {
    Matrix6cd a = -ci * omega * Matrix6cd::Identity() - network.drift_sideband;
    Eigen::PartialPivLU<Matrix6cd> lu(a);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
        throw std::runtime_error("network response singular at requested frequency");
    return lu.solve(Matrix6cd::Identity()) * network.coupling;
}

Matrix10cd sideband_scattering(const LinearNetwork& network, double omega) {
    return network.coupling.transpose() * sideband_transfer(network, omega) -
           Matrix10cd::Identity();
}

// Conjugated spectral correlator C(w) = S N_in S^+ with per-port doubled
// input noise diag(n+1, n).
Matrix10cd spectral_correlator(const LinearNetwork& network, double omega, double n_ba) {
    const Matrix10cd s = sideband_scattering(network, omega);
    const auto n = port_occupancies(n_ba);
    Eigen::Matrix<double, 10, 1> diag;
    for (int k = 0; k < 5; ++k) {
        diag(2 * k) = n(k) + 1.0;
        diag(2 * k + 1) = n(k);
    }
    return s * diag.asDiagonal() * s.adjoint();
}

} // namespace

LinearNetwork build_network(const SystemParams& params) {
    const DerivedParams d = derive(params);
    LinearNetwork net;
    net.derived = d;

    const double g_om = d.g_om;
    const double g_em = params.g_em;
    const complexd half_ko{d.kappa_o / 2.0, 0.0};
    const complexd half_ke{d.kappa_e / 2.0, 0.0};
    const complexd half_km{params.kappa_m / 2.0, 0.0};

    Matrix6cd m = Matrix6cd::Zero();
    m(0, 0) = ci * params.delta_p - half_ko;
    m(1, 1) = -ci * params.delta_p - half_ko;
    m(2, 2) = -ci * params.omega_e - half_ke;
    m(3, 3) = ci * params.omega_e - half_ke;
    m(4, 4) = -ci * params.omega_m - half_km;
    m(5, 5) = ci * params.omega_m - half_km;
    m(0, 4) = ci * g_om;
    m(0, 5) = ci * g_om;
    m(1, 4) = -ci * g_om;
    m(1, 5) = -ci * g_om;
    m(2, 4) = ci * g_em;
    m(3, 5) = -ci * g_em;
    m(4, 0) = ci * g_om;
    m(4, 1) = ci * g_om;
    m(4, 2) = ci * g_em;
    m(5, 0) = -ci * g_om;
    m(5, 1) = -ci * g_om;
    m(5, 3) = -ci * g_em;
    net.drift = m;

    // Co-rotating frame: residual detunings on the diagonal, pair-creation
    // optomechanical coupling only.
    const double delta_e = params.omega_e - params.delta_p;
    const double delta_m = params.omega_m - params.delta_p;
    Matrix6cd r = Matrix6cd::Zero();
    r(0, 0) = -half_ko;
    r(1, 1) = -half_ko;
    r(2, 2) = -ci * delta_e - half_ke;
    r(3, 3) = ci * delta_e - half_ke;
    r(4, 4) = -ci * delta_m - half_km;
    r(5, 5) = ci * delta_m - half_km;
    r(0, 5) = ci * g_om;
    r(1, 4) = -ci * g_om;
    r(2, 4) = ci * g_em;
    r(3, 5) = -ci * g_em;
    r(4, 1) = ci * g_om;
    r(4, 2) = ci * g_em;
    r(5, 0) = -ci * g_om;
    r(5, 3) = -ci * g_em;
    net.drift_sideband = r;

    Matrix6x10cd n = Matrix6x10cd::Zero();
    const double rates[5] = {params.kappa_o_c, params.kappa_o_i, params.kappa_e_c,
                             params.kappa_e_i, params.kappa_m};
    const int mode_of_port[5] = {0, 0, 1, 1, 2};
    for (int p = 0; p < 5; ++p) {
        const double amp = std::sqrt(rates[p]);
        n(2 * mode_of_port[p], 2 * p) = amp;
        n(2 * mode_of_port[p] + 1, 2 * p + 1) = amp;
    }
    net.coupling = n;
    return net;
}

ScatteringMatrix scattering(const LinearNetwork& network, double omega) {
    ScatteringMatrix s;
    s.omega = omega;
    Matrix6cd a = Matrix6cd::Zero();
    a -= network.drift;
    a.diagonal() -= ci * omega * d6_signs();
    Eigen::PartialPivLU<Matrix6cd> lu(a);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
        throw std::runtime_error("scattering undefined: network on the instability boundary");
    s.s_modes = network.coupling.transpose() * lu.solve(Matrix6cd::Identity()) * network.coupling -
                Matrix10cd::Identity();
    s.s_quads = quadrature_map() * s.s_modes * quadrature_map_inverse();
    return s;
}

Matrix10d output_covariance(const LinearNetwork& network, double omega, double n_ba) {
    const Matrix10cd s = sideband_scattering(network, omega);
    const Matrix10cd sx = quadrature_map() * s * quadrature_map_inverse();
    const auto n = port_occupancies(n_ba);
    Eigen::Matrix<double, 10, 1> v_in;
    for (int k = 0; k < 5; ++k) {
        v_in(2 * k) = 2.0 * n(k) + 1.0;
        v_in(2 * k + 1) = 2.0 * n(k) + 1.0;
    }
    const Matrix10d v = (sx * v_in.asDiagonal() * sx.adjoint()).real();
    return 0.5 * (v + v.transpose());
}

StandardFormState reduce_standard_form(const LinearNetwork& network, double omega, double n_ba) {
    const Matrix10cd c = spectral_correlator(network, omega, n_ba);
    // Optical coupling port at -omega lives in the conjugate slot (index 1),
    // the microwave coupling port at +omega in slot 4 of the doubled vector.
    const double n_o = c(1, 1).real();
    const double n_e = c(4, 4).real() - 1.0;
    const complexd pair = c(4, 1); // <a_out[-w] c_out[w]>

    if (n_o < -1e-9 || n_e < -1e-9)
        throw std::runtime_error("reduced covariance has negative occupancy");

    // On resonance the pair correlation must sit on the (-w, +w) pattern;
    // an imaginary part there signals a convention bug. Off resonance the
    // phase is physical and is absorbed by a local rotation, which leaves
    // u, v and the symplectic spectrum unchanged.
    if (omega == 0.0) {
        const double residual = 2.0 * std::abs(pair.imag());
        if (residual > 1e-9 * std::max(1.0, 2.0 * std::abs(pair)))
            throw std::runtime_error("reduced covariance is not in standard form");
    }

    StandardFormState state;
    state.omega = omega;
    state.u = 1.0 + 2.0 * std::max(n_o, 0.0);
    state.v = 1.0 + 2.0 * std::max(n_e, 0.0);
    state.w = 2.0 * std::abs(pair);
    return state;
}

StandardFormState closed_form_uvw(const DerivedParams& derived, double n_ba) {
    const double margin = derived.pdc_margin;
    if (std::abs(margin) < 1e-9)
        throw std::domain_error("closed_form_uvw diverges: 1 + C_em - C_om = 0");
    const double zo = derived.zeta_o;
    const double ze = derived.zeta_e;
    const double com = derived.c_om;
    const double cem = derived.c_em;
    const double den = margin * margin;

    StandardFormState s;
    s.omega = 0.0;
    s.u = 1.0 + 8.0 * zo * com * (1.0 + cem + n_ba + cem * n_ba * (1.0 - ze)) / den;
    s.v = 1.0 + 8.0 * ze * (cem * (com + n_ba) + (com - 1.0) * (com - 1.0) * n_ba * (1.0 - ze)) / den;
    s.w = 4.0 * std::sqrt(zo * ze * cem * com) *
          (1.0 + cem + com + 2.0 * n_ba * (ze + com * (1.0 - ze))) / den;
    return s;
}

StabilityReport stability(const LinearNetwork& network) {
    Eigen::ComplexEigenSolver<Matrix6cd> solver(network.drift, false);
    StabilityReport report;
    report.margin = solver.eigenvalues().real().maxCoeff();
    report.stable = report.margin < -1e-12;
    report.pdc_margin = network.derived.pdc_margin;
    return report;
}

SpectrumResult spectrum(const LinearNetwork& network, const std::vector<double>& omega_grid,
                        double n_ba) {
    const StabilityReport rep = stability(network);
    if (!rep.stable) throw std::runtime_error("spectrum requested for an unstable network");
    SpectrumResult result;
    result.omega = omega_grid;
    result.u.reserve(omega_grid.size());
    result.v.reserve(omega_grid.size());
    for (double w : omega_grid) {
        const StandardFormState s = reduce_standard_form(network, w, n_ba);
        result.u.push_back(s.u);
        result.v.push_back(s.v);
    }
    return result;
}

std::vector<double> symmetric_grid(double span, int points) {
    if (!(span > 0.0) || points < 2)
        throw std::invalid_argument("symmetric_grid: span must be > 0 and points >= 2");
    std::vector<double> grid(points);
    const double step = 2.0 * span / (points - 1);
    for (int i = 0; i < points; ++i) grid[i] = -span + step * i;
    return grid;
}

std::vector<double> effective_linewidths(const LinearNetwork& network) {
    Eigen::ComplexEigenSolver<Matrix6cd> solver(network.drift_sideband, false);
    std::vector<double> widths(6);
    for (int i = 0; i < 6; ++i) widths[i] = 2.0 * std::abs(solver.eigenvalues()(i).real());
    std::sort(widths.begin(), widths.end());
    return widths;
}

Eigen::Matrix4d standard_form_matrix(const StandardFormState& state) {
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = v(1, 1) = state.u;
    v(2, 2) = v(3, 3) = state.v;
    v(0, 2) = v(2, 0) = -state.w;
    v(1, 3) = v(3, 1) = state.w;
    return v;
}

double min_symplectic_eigenvalue(const Eigen::Matrix4d& covariance) {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 2; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    const Eigen::Matrix4cd m = ci * (omega * covariance);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
    return solver.eigenvalues().cwiseAbs().minCoeff();
}

} // namespace eomsim
