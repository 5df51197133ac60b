#pragma once

#include <optional>

namespace eomsim {

namespace constants {
// 2019 SI exact values.
inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double two_pi = 6.283185307179586476925286766559;
} // namespace constants

/// Device and environment parameters of the electro-optomechanical source.
/// All rates and frequencies are angular (rad/s); config files use ordinary
/// Hz and are converted once at load.
struct SystemParams {
    double g_em = 0.0;    // piezoelectric (microwave-mechanical) coupling rate
    double g_om0 = 0.0;   // single-photon optomechanical coupling rate
    double n_pump = 0.0;  // mean intracavity pump photon number

    double kappa_o_i = 0.0; // optical internal loss rate
    double kappa_o_c = 0.0; // optical coupling (readout) rate
    double kappa_e_i = 0.0; // microwave internal loss rate
    double kappa_e_c = 0.0; // microwave coupling (readout) rate
    double kappa_m = 0.0;   // mechanical loss rate

    double omega_m = 0.0; // mechanical mode frequency
    double omega_e = 0.0; // microwave mode frequency
    double omega_o = 0.0; // optical mode frequency (metadata; enters no matrix)
    double delta_p = 0.0; // pump detuning; blue sideband is delta_p == omega_m

    double temperature = 0.0; // bath temperature, kelvin
    std::optional<double> n_ba_override; // explicit bath occupancy, bypasses Planck

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// Secondary quantities derived from SystemParams.
struct DerivedParams {
    double g_om = 0.0;    // pump-enhanced optomechanical coupling g_om0*sqrt(n_pump)
    double kappa_o = 0.0; // total optical linewidth
    double kappa_e = 0.0; // total microwave linewidth
    double zeta_o = 0.0;  // optical extraction ratio kappa_o_c/kappa_o
    double zeta_e = 0.0;  // microwave extraction ratio kappa_e_c/kappa_e
    double c_om = 0.0;    // optomechanical cooperativity 4 g_om^2/(kappa_o kappa_m)
    double c_em = 0.0;    // electromechanical cooperativity 4 g_em^2/(kappa_e kappa_m)
    double n_ba = 0.0;    // shared thermal occupancy of microwave-internal and mechanical baths
    double pdc_margin = 0.0; // 1 + c_em - c_om; parametric instability at <= 0
};

/// Planck occupancy (exp(hbar w / kB T) - 1)^-1; zero temperature handled
/// analytically. Rejects non-finite input.
double thermal_occupancy(double omega, double temperature);

DerivedParams derive(const SystemParams& params);

/// Pump photon number reaching the requested optomechanical cooperativity.
double required_pump_photons(const SystemParams& params, double target_c_om);

} // namespace eomsim
