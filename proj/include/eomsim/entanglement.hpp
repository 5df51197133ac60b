#pragma once

#include <array>

#include "eomsim/network.hpp"

namespace eomsim {

/// Entanglement of formation and purity of a standard-form two-mode state.
struct EntanglementReport {
    double e_f = 0.0;           // entanglement of formation, ebits
    double r_antisqueeze = 0.0; // minimal disentangling anti-squeezing
    double purity = 1.0;
    double gamma = 0.0;
    double beta_plus = 0.0;
    double beta_minus = 0.0;
};

EntanglementReport entanglement_of_formation(const StandardFormState& state);

/// Gaussian purity 1/sqrt(det V); rejects det V < 1 as unphysical.
double purity(const StandardFormState& state);

/// Coincidence outcome probabilities for one pair of analyzer settings,
/// indexed by the detector branches (mu, nu).
struct OutcomeTable {
    double pp = 0.0;
    double pm = 0.0;
    double mp = 0.0;
    double mm = 0.0;

    double sum() const { return pp + pm + mp + mm; }
    double correlator() const { return pp + mm - pm - mp; } // E(phi_o, phi_e)
};

/// Bell-state fidelity lower bound from normalized tables at the two
/// settings phi_o = phi_e = 0 and phi_o = phi_e = pi/2.
double fidelity_lower_bound(const OutcomeTable& at_zero, const OutcomeTable& at_half_pi);

/// On-resonance analytic fidelity lower bound for efficiencies eta_o, eta_e.
double fidelity_lower_bound_analytic(const StandardFormState& state, double eta_o, double eta_e);

struct BellReport {
    std::array<double, 4> settings{};    // phi_o, phi_e, phi_o', phi_e'
    std::array<double, 4> correlators{}; // E(oe), E(o'e'), E(o'e), E(oe')
    double s_value = 0.0;
};

/// CHSH quantity from normalized tables at the four setting pairs
/// (phi_o,phi_e), (phi_o',phi_e'), (phi_o',phi_e), (phi_o,phi_e').
BellReport chsh_S(const OutcomeTable& oe, const OutcomeTable& oe_pp, const OutcomeTable& op_e,
                  const OutcomeTable& o_ep, const std::array<double, 4>& settings);

/// Analytic S(0, phi_e; pi/2, phi_e + pi/2) on resonance.
double chsh_s_curve_analytic(const StandardFormState& state, double phi_e, double eta_o,
                             double eta_e);

/// Analytic |S|_max, attained at phi_e = pi/4 + k pi.
double chsh_max_analytic(const StandardFormState& state, double eta_o, double eta_e);

/// Throws std::invalid_argument unless the state satisfies the physicality
/// bound (min symplectic eigenvalue >= 1 - 1e-9).
void require_physical(const StandardFormState& state);

} // namespace eomsim
