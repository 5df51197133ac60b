#include "eomsim/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eomsim {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void require_positive(double value, const char* name) {
    require(std::isfinite(value) && value > 0.0, std::string(name) + " must be finite and > 0");
}

} // namespace

void SystemParams::validate() const {
    require_positive(g_em, "g_em");
    require_positive(g_om0, "g_om0");
    require(std::isfinite(n_pump) && n_pump >= 0.0, "n_pump must be finite and >= 0");
    require_positive(kappa_o_i, "kappa_o_i");
    require_positive(kappa_o_c, "kappa_o_c");
    require_positive(kappa_e_i, "kappa_e_i");
    require_positive(kappa_e_c, "kappa_e_c");
    require_positive(kappa_m, "kappa_m");
    require_positive(omega_m, "omega_m");
    require_positive(omega_e, "omega_e");
    require_positive(omega_o, "omega_o");
    require_positive(delta_p, "delta_p");
    require(std::isfinite(temperature) && temperature >= 0.0,
            "temperature must be finite and >= 0");
    if (n_ba_override) {
        require(std::isfinite(*n_ba_override) && *n_ba_override >= 0.0,
                "n_ba_override must be finite and >= 0");
    }
}

double thermal_occupancy(double omega, double temperature) {
    if (!std::isfinite(omega) || !std::isfinite(temperature))
        throw std::invalid_argument("thermal_occupancy: non-finite input");
    if (omega <= 0.0) throw std::invalid_argument("thermal_occupancy: omega must be > 0");
    if (temperature < 0.0)
        throw std::invalid_argument("thermal_occupancy: temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
    // 1/expm1 stays accurate for small x and underflows cleanly for large x.
    return 1.0 / std::expm1(x);
}

DerivedParams derive(const SystemParams& params) {
    params.validate();
    DerivedParams d;
    d.g_om = params.g_om0 * std::sqrt(params.n_pump);
    d.kappa_o = params.kappa_o_i + params.kappa_o_c;
    d.kappa_e = params.kappa_e_i + params.kappa_e_c;
    d.zeta_o = params.kappa_o_c / d.kappa_o;
    d.zeta_e = params.kappa_e_c / d.kappa_e;
    d.c_om = 4.0 * d.g_om * d.g_om / (d.kappa_o * params.kappa_m);
    d.c_em = 4.0 * params.g_em * params.g_em / (d.kappa_e * params.kappa_m);
    d.n_ba = params.n_ba_override ? *params.n_ba_override
                                  : thermal_occupancy(params.omega_e, params.temperature);
    d.pdc_margin = 1.0 + d.c_em - d.c_om;
    return d;
}

double required_pump_photons(const SystemParams& params, double target_c_om) {
    if (!std::isfinite(target_c_om) || target_c_om < 0.0)
        throw std::invalid_argument("required_pump_photons: target must be finite and >= 0");
    if (target_c_om == 0.0) return 0.0;
    if (params.g_om0 <= 0.0)
        throw std::invalid_argument("required_pump_photons: unreachable target, g_om0 == 0");
    const double kappa_o = params.kappa_o_i + params.kappa_o_c;
    return target_c_om * kappa_o * params.kappa_m / (4.0 * params.g_om0 * params.g_om0);
}

} // namespace eomsim
