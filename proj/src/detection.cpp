#include "eomsim/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eomsim {

namespace {

constexpr double pi = 3.14159265358979323846;

void require_efficiency(double eta, const char* name) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

// 2x2 quadrature block of a complex mode-matrix entry.
Eigen::Matrix2d quad_block(const std::complex<double>& entry) {
    Eigen::Matrix2d b;
    b << entry.real(), -entry.imag(), entry.imag(), entry.real();
    return b;
}

// Quadrature representation of the two-port mixing transform.
Eigen::Matrix4d mixer(const Eigen::Matrix2cd& modes) {
    Eigen::Matrix4d s;
    s.block<2, 2>(0, 0) = quad_block(modes(0, 0));
    s.block<2, 2>(0, 2) = quad_block(modes(0, 1));
    s.block<2, 2>(2, 0) = quad_block(modes(1, 0));
    s.block<2, 2>(2, 2) = quad_block(modes(1, 1));
    return s;
}

double narrowest_linewidth(const LinearNetwork& network) {
    return effective_linewidths(network).front();
}

void require_resolving_grid(const LinearNetwork& network, const std::vector<double>& grid) {
    if (grid.size() < 9) throw std::invalid_argument("frequency grid too coarse");
    double max_step = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        max_step = std::max(max_step, grid[i] - grid[i - 1]);
    if (max_step * 8.0 > narrowest_linewidth(network))
        throw std::invalid_argument(
            "frequency grid too coarse: fewer than 8 points per narrowest linewidth");
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return sum;
}

// Trapezoid over every other grid point, for the resolution self-check.
double trapezoid_half_density(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 2; i < x.size(); i += 2) {
        sum += 0.5 * (y[i] + y[last]) * (x[i] - x[last]);
        last = i;
    }
    if (last + 1 < x.size())
        sum += 0.5 * (y.back() + y[last]) * (x.back() - x[last]);
    return sum;
}

} // namespace

void DetectorModel::validate() const {
    require_efficiency(eta, "eta");
    require_efficiency(transmissivity, "transmissivity");
    if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate))
        throw std::invalid_argument("dark_rate must be finite and >= 0");
    if (!(window > 0.0) || !std::isfinite(window))
        throw std::invalid_argument("window must be finite and > 0");
}

Eigen::Matrix4d measurement_covariance(const StandardFormState& state,
                                       const MeasurementSetting& setting) {
    require_physical(state);
    if (setting.mu * setting.mu != 1 || setting.nu * setting.nu != 1)
        throw std::invalid_argument("detector branches must be +1 or -1");

    // Two uncorrelated time-bin copies, modes ordered (o1, o2, e1, e2).
    Eigen::Matrix<double, 8, 8> v = Eigen::Matrix<double, 8, 8>::Identity();
    Eigen::Matrix2d cross;
    cross << -state.w, 0.0, 0.0, state.w;
    for (int bin = 0; bin < 2; ++bin) {
        const int o = 2 * bin;
        const int e = 4 + 2 * bin;
        v.block<2, 2>(o, o) = state.u * Eigen::Matrix2d::Identity();
        v.block<2, 2>(e, e) = state.v * Eigen::Matrix2d::Identity();
        v.block<2, 2>(o, e) = cross;
        v.block<2, 2>(e, o) = cross;
    }

    const std::complex<double> i{0.0, 1.0};
    Eigen::Matrix2cd optical;
    optical << 1.0, std::exp(-i * setting.phi_o), -std::exp(i * setting.phi_o), 1.0;
    optical /= std::sqrt(2.0);
    Eigen::Matrix2cd microwave;
    microwave << 1.0, std::exp(i * setting.phi_e), -std::exp(-i * setting.phi_e), 1.0;
    microwave /= std::sqrt(2.0);

    Eigen::Matrix<double, 8, 8> s = Eigen::Matrix<double, 8, 8>::Zero();
    s.block<4, 4>(0, 0) = mixer(optical);
    s.block<4, 4>(4, 4) = mixer(microwave);
    const Eigen::Matrix<double, 8, 8> mixed = s * v * s.transpose();

    const int row_o = setting.mu > 0 ? 0 : 2;
    const int row_e = setting.nu > 0 ? 4 : 6;
    Eigen::Matrix4d reduced;
    reduced.block<2, 2>(0, 0) = mixed.block<2, 2>(row_o, row_o);
    reduced.block<2, 2>(0, 2) = mixed.block<2, 2>(row_o, row_e);
    reduced.block<2, 2>(2, 0) = mixed.block<2, 2>(row_e, row_o);
    reduced.block<2, 2>(2, 2) = mixed.block<2, 2>(row_e, row_e);
    return reduced;
}

double click_probability(const Eigen::Matrix2d& covariance, double eta) {
    require_efficiency(eta, "eta");
    if (eta == 0.0) return 0.0;
    const Eigen::Matrix2d sigma =
        eta / (2.0 - eta) * covariance + Eigen::Matrix2d::Identity();
    return 1.0 - 2.0 / ((2.0 - eta) * std::sqrt(sigma.determinant()));
}

double coincidence_probability(const StandardFormState& state, const MeasurementSetting& setting,
                               double eta_o, double eta_e) {
    require_physical(state);
    require_efficiency(eta_o, "eta_o");
    require_efficiency(eta_e, "eta_e");
    const double x = 2.0 + eta_o * (state.u - 1.0);
    const double y = 2.0 + eta_e * (state.v - 1.0);
    // The joint term carries w^2 (1 + mu nu cos(phi_o - phi_e)) / 2: each
    // branch pair correlation is w cos((phi_o - phi_e)/2)/sqrt(2)-scaled,
    // which is what the measurement-covariance determinant produces.
    const double angular =
        0.5 * (1.0 + setting.mu * setting.nu * std::cos(setting.phi_o - setting.phi_e));
    const double joint = x * y - eta_o * eta_e * state.w * state.w * angular;
    return 1.0 - 2.0 / x - 2.0 / y + 4.0 / joint;
}

double coincidence_probability_covariance(const StandardFormState& state,
                                          const MeasurementSetting& setting, double eta_o,
                                          double eta_e) {
    require_efficiency(eta_o, "eta_o");
    require_efficiency(eta_e, "eta_e");
    const Eigen::Matrix4d v = measurement_covariance(state, setting);
    if (eta_o == 0.0 || eta_e == 0.0) return 0.0;

    const double ho = eta_o / (2.0 - eta_o);
    const double he = eta_e / (2.0 - eta_e);
    const Eigen::Matrix2d sigma_a = ho * v.block<2, 2>(0, 0) + Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d sigma_c = he * v.block<2, 2>(2, 2) + Eigen::Matrix2d::Identity();
    Eigen::Matrix4d scale = Eigen::Matrix4d::Zero();
    scale.block<2, 2>(0, 0) = ho * Eigen::Matrix2d::Identity();
    scale.block<2, 2>(2, 2) = he * Eigen::Matrix2d::Identity();
    const Eigen::Matrix4d sigma_ac = v * scale + Eigen::Matrix4d::Identity();

    return 1.0 - 2.0 / ((2.0 - eta_o) * std::sqrt(sigma_a.determinant())) -
           2.0 / ((2.0 - eta_e) * std::sqrt(sigma_c.determinant())) +
           4.0 / ((2.0 - eta_o) * (2.0 - eta_e) * std::sqrt(sigma_ac.determinant()));
}

OutcomeTable normalized_probabilities(const StandardFormState& state, double phi_o, double phi_e,
                                      double eta_o, double eta_e) {
    OutcomeTable raw;
    raw.pp = coincidence_probability(state, {phi_o, phi_e, +1, +1}, eta_o, eta_e);
    raw.pm = coincidence_probability(state, {phi_o, phi_e, +1, -1}, eta_o, eta_e);
    raw.mp = coincidence_probability(state, {phi_o, phi_e, -1, +1}, eta_o, eta_e);
    raw.mm = coincidence_probability(state, {phi_o, phi_e, -1, -1}, eta_o, eta_e);
    const double total = raw.sum();
    if (!(total > 0.0))
        throw std::runtime_error("normalized_probabilities: all coincidence branches vanish");
    raw.pp /= total;
    raw.pm /= total;
    raw.mp /= total;
    raw.mm /= total;
    return raw;
}

IntegratedProbability coincidence_integrated(const LinearNetwork& network, double n_ba,
                                             const MeasurementSetting& setting, double eta_o,
                                             double eta_e, const std::vector<double>& omega_grid) {
    if (!stability(network).stable)
        throw std::runtime_error("coincidence_integrated: unstable network");
    require_resolving_grid(network, omega_grid);
    std::vector<double> integrand(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const StandardFormState s = reduce_standard_form(network, omega_grid[i], n_ba);
        integrand[i] = coincidence_probability(s, setting, eta_o, eta_e);
    }
    IntegratedProbability result;
    result.value = trapezoid(omega_grid, integrand);
    result.resolution_error =
        std::abs(result.value - trapezoid_half_density(omega_grid, integrand));
    return result;
}

GenerationRates generation_rates(const LinearNetwork& network, double n_ba,
                                 const std::vector<double>& omega_grid) {
    if (!stability(network).stable)
        throw std::runtime_error("generation_rates: unstable network");
    require_resolving_grid(network, omega_grid);
    GenerationRates rates;
    rates.omega = omega_grid;
    rates.cross_spectrum.resize(omega_grid.size());
    std::vector<double> flux_o(omega_grid.size());
    std::vector<double> flux_e(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const StandardFormState s = reduce_standard_form(network, omega_grid[i], n_ba);
        flux_o[i] = 0.5 * (s.u - 1.0);
        flux_e[i] = 0.5 * (s.v - 1.0);
        rates.cross_spectrum[i] = 0.5 * s.w;
    }
    rates.r_o = trapezoid(omega_grid, flux_o) / (2.0 * pi);
    rates.r_e = trapezoid(omega_grid, flux_e) / (2.0 * pi);
    return rates;
}

RateBudget rate_budget(const GenerationRates& rates, const DetectorModel& optical,
                       const DetectorModel& microwave) {
    optical.validate();
    microwave.validate();
    if (std::abs(optical.window - microwave.window) >
        1e-12 * std::max(optical.window, microwave.window))
        throw std::invalid_argument("rate_budget: detection chains disagree on the window");
    const double tau_b = optical.window;

    RateBudget budget;
    budget.r_o = rates.r_o;
    budget.r_e = rates.r_e;

    const double signal_o = optical.eta * optical.transmissivity * rates.r_o;
    const double signal_e = microwave.eta * microwave.transmissivity * rates.r_e;
    budget.r_ac = (signal_o + optical.dark_rate) * (signal_e + microwave.dark_rate) * tau_b;

    // R_oe(tau) from the cross spectrum, then R_cc = eta T eta T int |R_oe|^2.
    const int tau_points = 1025;
    std::vector<double> tau(tau_points);
    std::vector<double> correlation_sq(tau_points);
    std::vector<double> integrand(rates.omega.size());
    for (int i = 0; i < tau_points; ++i) tau[i] = tau_b * i / (tau_points - 1);
    for (int i = 0; i < tau_points; ++i) {
        for (std::size_t k = 0; k < rates.omega.size(); ++k)
            integrand[k] = rates.cross_spectrum[k] * std::cos(rates.omega[k] * tau[i]);
        const double r_oe = trapezoid(rates.omega, integrand) / (2.0 * pi);
        correlation_sq[i] = r_oe * r_oe;
    }
    budget.r_cc = optical.eta * microwave.eta * optical.transmissivity *
                  microwave.transmissivity * trapezoid(tau, correlation_sq);

    budget.r_c = budget.r_ac + budget.r_cc;
    if (budget.r_ac > 0.0) {
        budget.g2 = budget.r_c / budget.r_ac;
    } else {
        budget.g2 = budget.r_cc > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    budget.xi_o = signal_o > 0.0
                      ? optical.dark_rate / signal_o
                      : (optical.dark_rate > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    budget.xi_e = signal_e > 0.0
                      ? microwave.dark_rate / signal_e
                      : (microwave.dark_rate > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    budget.fidelity_ratio = budget.g2 / (2.0 + budget.xi_o + budget.xi_e + budget.xi_o * budget.xi_e);
    return budget;
}

} // namespace eomsim
