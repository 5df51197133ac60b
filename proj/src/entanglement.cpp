#include "eomsim/entanglement.hpp"

#include <cmath>
#include <stdexcept>

namespace eomsim {

namespace {

void require_normalized(const OutcomeTable& table) {
    if (std::abs(table.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("outcome table is not normalized");
}

struct ClickDenominators {
    double x; // 2 + eta_o (u - 1)
    double y; // 2 + eta_e (v - 1)
};

ClickDenominators denominators(const StandardFormState& state, double eta_o, double eta_e) {
    return {2.0 + eta_o * (state.u - 1.0), 2.0 + eta_e * (state.v - 1.0)};
}

} // namespace

void require_physical(const StandardFormState& state) {
    const double nu = min_symplectic_eigenvalue(standard_form_matrix(state));
    if (!(nu >= 1.0 - 1e-9))
        throw std::invalid_argument("state violates the physicality bound");
}

EntanglementReport entanglement_of_formation(const StandardFormState& state) {
    require_physical(state);
    const double u = state.u;
    const double v = state.v;
    const double w = state.w;

    EntanglementReport report;
    const double det_v = (u * v - w * w) * (u * v - w * w);
    report.gamma = 2.0 * (det_v + 1.0) - (u - v) * (u - v);
    report.beta_plus = (u + v + 2.0 * w) * (u + v + 2.0 * w);
    report.beta_minus = (u + v - 2.0 * w) * (u + v - 2.0 * w);
    report.purity = 1.0 / (u * v - w * w);

    double disc = report.gamma * report.gamma - report.beta_plus * report.beta_minus;
    if (disc < 0.0) {
        // roundoff at the pure-state branch
        if (disc < -1e-12 * report.gamma * report.gamma)
            throw std::runtime_error("entanglement_of_formation: negative discriminant");
        disc = 0.0;
    }
    const double r = 0.25 * std::log((report.gamma - std::sqrt(disc)) / report.beta_minus);
    if (r > 0.0) {
        report.r_antisqueeze = r;
        const double ch = std::cosh(r) * std::cosh(r);
        const double sh = std::sinh(r) * std::sinh(r);
        report.e_f = ch * std::log2(ch) - sh * std::log2(sh);
    }
    return report;
}

double purity(const StandardFormState& state) {
    const double root_det = state.u * state.v - state.w * state.w;
    if (root_det < 1.0 - 1e-9)
        throw std::invalid_argument("purity: det V < 1 is unphysical");
    return 1.0 / root_det;
}

double fidelity_lower_bound(const OutcomeTable& at_zero, const OutcomeTable& at_half_pi) {
    require_normalized(at_zero);
    require_normalized(at_half_pi);
    return 0.5 * (at_zero.pp + at_zero.mm + at_half_pi.pp + at_half_pi.mm) -
           0.5 * at_half_pi.pm - 0.5 * at_half_pi.mp - std::sqrt(at_zero.pm * at_zero.mp);
}

double fidelity_lower_bound_analytic(const StandardFormState& state, double eta_o, double eta_e) {
    require_physical(state);
    if (!(eta_o > 0.0 && eta_o <= 1.0 && eta_e > 0.0 && eta_e <= 1.0))
        throw std::invalid_argument("efficiencies must lie in (0, 1]");
    const auto [x, y] = denominators(state, eta_o, eta_e);
    const double coupling = eta_o * eta_e * state.w * state.w;
    const double a = 4.0 / (x * y - coupling);
    const double b = 4.0 / (x * y);
    return (a - b) / (2.0 - 4.0 / x - 4.0 / y + a + b);
}

BellReport chsh_S(const OutcomeTable& oe, const OutcomeTable& oe_pp, const OutcomeTable& op_e,
                  const OutcomeTable& o_ep, const std::array<double, 4>& settings) {
    for (const OutcomeTable* t : {&oe, &oe_pp, &op_e, &o_ep}) require_normalized(*t);
    BellReport report;
    report.settings = settings;
    report.correlators = {oe.correlator(), oe_pp.correlator(), op_e.correlator(),
                          o_ep.correlator()};
    report.s_value = report.correlators[0] + report.correlators[1] + report.correlators[2] -
                     report.correlators[3];
    return report;
}

double chsh_s_curve_analytic(const StandardFormState& state, double phi_e, double eta_o,
                             double eta_e) {
    require_physical(state);
    const auto [x, y] = denominators(state, eta_o, eta_e);
    const double coupling = eta_o * eta_e * state.w * state.w;
    const double base = 2.0 - 4.0 / x - 4.0 / y;
    const auto cos_sq = [](double t) { return std::cos(t) * std::cos(t); };
    const double pi = 3.14159265358979323846;

    // The two ratio terms are E(pi/2, phi_e) - E(0, phi_e + pi/2) and
    // E(0, phi_e) + E(pi/2, phi_e + pi/2); both enter with plus, which is
    // what makes S(pi/4) coincide with the |S|_max expression.
    const double e = 4.0 / (x * y - coupling * cos_sq(pi / 4.0 - phi_e / 2.0));
    const double f = 4.0 / (x * y - coupling * cos_sq(pi / 4.0 + phi_e / 2.0));
    const double g = 4.0 / (x * y - coupling * cos_sq(phi_e / 2.0));
    const double h = 4.0 / (x * y - coupling * std::sin(phi_e / 2.0) * std::sin(phi_e / 2.0));
    return 2.0 * (e - f) / (base + e + f) + 2.0 * (g - h) / (base + g + h);
}

double chsh_max_analytic(const StandardFormState& state, double eta_o, double eta_e) {
    require_physical(state);
    const auto [x, y] = denominators(state, eta_o, eta_e);
    const double coupling = eta_o * eta_e * state.w * state.w;
    const double pi = 3.14159265358979323846;
    const double c = 4.0 / (x * y - coupling * std::cos(pi / 8.0) * std::cos(pi / 8.0));
    const double d = 4.0 / (x * y - coupling * std::sin(pi / 8.0) * std::sin(pi / 8.0));
    return std::abs(4.0 * (c - d) / (2.0 - 4.0 / x - 4.0 / y + c + d));
}

} // namespace eomsim
