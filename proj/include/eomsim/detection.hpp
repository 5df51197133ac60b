#pragma once

#include <vector>

#include "eomsim/entanglement.hpp"
#include "eomsim/network.hpp"

namespace eomsim {

/// On/off detector with path loss and dark counts for one detection chain.
struct DetectorModel {
    double eta = 1.0;            // detector efficiency
    double transmissivity = 1.0; // path transmissivity
    double dark_rate = 0.0;      // dark count rate, Hz
    double window = 0.0;         // collection window, s

    void validate() const;
};

/// Analyzer phases and detector outcome branches for one joint measurement.
struct MeasurementSetting {
    double phi_o = 0.0;
    double phi_e = 0.0;
    int mu = +1;
    int nu = +1;
};

/// Reduced 4x4 covariance of the (mu, nu) output branches after the
/// time-bin mode-mixing transforms, built from two independent copies of
/// the standard-form state.
Eigen::Matrix4d measurement_covariance(const StandardFormState& state,
                                       const MeasurementSetting& setting);

/// Click probability of an on/off detector with efficiency eta on a
/// single-mode Gaussian state with quadrature covariance V.
double click_probability(const Eigen::Matrix2d& covariance, double eta);

/// Closed-form per-frequency coincidence probability.
double coincidence_probability(const StandardFormState& state, const MeasurementSetting& setting,
                               double eta_o, double eta_e);

/// Same probability evaluated through the measurement covariance and the
/// Weyl-transform determinant formula; independent of the closed form.
double coincidence_probability_covariance(const StandardFormState& state,
                                          const MeasurementSetting& setting, double eta_o,
                                          double eta_e);

/// Normalized heralded probabilities over the four (mu, nu) branches.
OutcomeTable normalized_probabilities(const StandardFormState& state, double phi_o, double phi_e,
                                      double eta_o, double eta_e);

struct IntegratedProbability {
    double value = 0.0;
    double resolution_error = 0.0; // |value - half-density estimate|
};

/// Frequency-integrated coincidence probability over a sideband grid.
IntegratedProbability coincidence_integrated(const LinearNetwork& network, double n_ba,
                                             const MeasurementSetting& setting, double eta_o,
                                             double eta_e, const std::vector<double>& omega_grid);

struct GenerationRates {
    double r_o = 0.0; // optical photon flux out of the coupling port, Hz
    double r_e = 0.0; // microwave photon flux, Hz
    std::vector<double> omega;
    std::vector<double> cross_spectrum; // w(omega)/2
};

GenerationRates generation_rates(const LinearNetwork& network, double n_ba,
                                 const std::vector<double>& omega_grid);

/// Photon counting-rate budget of the coincidence measurement.
struct RateBudget {
    double r_o = 0.0;
    double r_e = 0.0;
    double r_cc = 0.0; // correlated coincidence rate
    double r_ac = 0.0; // accidental coincidence rate
    double r_c = 0.0;  // total coincidence rate, r_ac + r_cc
    double g2 = 0.0;   // r_c / r_ac; +inf when r_ac == 0 with r_cc > 0
    double xi_o = 0.0; // dark-to-signal ratio, optical side
    double xi_e = 0.0;
    double fidelity_ratio = 0.0; // g2 / (2 + xi_o + xi_e + xi_o xi_e)
};

RateBudget rate_budget(const GenerationRates& rates, const DetectorModel& optical,
                       const DetectorModel& microwave);

} // namespace eomsim
