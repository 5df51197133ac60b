#include "eomsim/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace eomsim {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

namespace {

json json_number(double value) {
    if (std::isinf(value)) return value > 0 ? "infinity" : "-infinity";
    if (std::isnan(value)) return nullptr;
    return value;
}

constexpr double inv_two_pi = 1.0 / constants::two_pi;

} // namespace

json params_json(const SystemParams& params, const DerivedParams& derived) {
    json j;
    j["g_em_hz"] = params.g_em * inv_two_pi;
    j["g_om0_hz"] = params.g_om0 * inv_two_pi;
    j["n_pump"] = params.n_pump;
    j["kappa_o_i_hz"] = params.kappa_o_i * inv_two_pi;
    j["kappa_o_c_hz"] = params.kappa_o_c * inv_two_pi;
    j["kappa_e_i_hz"] = params.kappa_e_i * inv_two_pi;
    j["kappa_e_c_hz"] = params.kappa_e_c * inv_two_pi;
    j["kappa_m_hz"] = params.kappa_m * inv_two_pi;
    j["omega_m_hz"] = params.omega_m * inv_two_pi;
    j["omega_e_hz"] = params.omega_e * inv_two_pi;
    j["omega_o_hz"] = params.omega_o * inv_two_pi;
    j["delta_p_hz"] = params.delta_p * inv_two_pi;
    j["temperature_k"] = params.temperature;
    if (params.n_ba_override) j["n_ba_override"] = *params.n_ba_override;
    json d;
    d["g_om_hz"] = derived.g_om * inv_two_pi;
    d["kappa_o_hz"] = derived.kappa_o * inv_two_pi;
    d["kappa_e_hz"] = derived.kappa_e * inv_two_pi;
    d["zeta_o"] = derived.zeta_o;
    d["zeta_e"] = derived.zeta_e;
    d["c_om"] = derived.c_om;
    d["c_em"] = derived.c_em;
    d["n_ba"] = derived.n_ba;
    d["pdc_margin"] = derived.pdc_margin;
    j["derived"] = d;
    return j;
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid, const json& resolved) {
    out << "# " << resolved.dump() << "\n";
    out << grid.x.name << "," << grid.y.name;
    for (const auto& name : grid.field_names) out << "," << name;
    out << ",status\n";
    for (int iy = 0; iy < grid.y.count; ++iy) {
        for (int ix = 0; ix < grid.x.count; ++ix) {
            const std::size_t at = grid.cell(ix, iy);
            out << format_double(grid.x.value(ix)) << "," << format_double(grid.y.value(iy));
            if (grid.stable[at]) {
                for (const auto& name : grid.field_names)
                    out << "," << format_double(grid.fields.at(name)[at]);
                out << ",ok\n";
            } else {
                for (std::size_t k = 0; k < grid.field_names.size(); ++k) out << ",";
                out << ",unstable\n";
            }
        }
    }
}

namespace {

json contours_json(const SweepGrid& grid) {
    json all = json::object();
    for (const auto& [name, polylines] : grid.contours) {
        json list = json::array();
        for (const auto& polyline : polylines) {
            json points = json::array();
            for (const auto& p : polyline) points.push_back({p.x, p.y});
            list.push_back(std::move(points));
        }
        all[name] = std::move(list);
    }
    return all;
}

} // namespace

json sweep_json(const SweepGrid& grid, const json& resolved) {
    json j;
    j["params"] = resolved;
    j["x"] = {{"name", grid.x.name},
              {"scale", grid.x.log_scale ? "log" : "linear"},
              {"min", grid.x.min},
              {"max", grid.x.max},
              {"count", grid.x.count}};
    j["y"] = {{"name", grid.y.name},
              {"scale", grid.y.log_scale ? "log" : "linear"},
              {"min", grid.y.min},
              {"max", grid.y.max},
              {"count", grid.y.count}};
    json fields = json::object();
    for (const auto& name : grid.field_names) fields[name] = grid.fields.at(name);
    j["fields"] = std::move(fields);
    j["stable"] = grid.stable;
    j["contours"] = contours_json(grid);
    return j;
}

void write_contours_csv(std::ostream& out, const std::string& name,
                        const std::vector<Polyline>& polylines, const json& resolved) {
    out << "# " << resolved.dump() << "\n";
    out << "contour,segment,x,y\n";
    for (std::size_t s = 0; s < polylines.size(); ++s)
        for (const auto& p : polylines[s])
            out << name << "," << s << "," << format_double(p.x) << "," << format_double(p.y)
                << "\n";
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& result, const json& resolved) {
    out << "# " << resolved.dump() << "\n";
    out << "omega_hz,u,v\n";
    for (std::size_t i = 0; i < result.omega.size(); ++i)
        out << format_double(result.omega[i] * inv_two_pi) << "," << format_double(result.u[i])
            << "," << format_double(result.v[i]) << "\n";
}

json spectrum_json(const SpectrumResult& result, const json& resolved) {
    json j;
    j["params"] = resolved;
    json omega_hz = json::array();
    for (double w : result.omega) omega_hz.push_back(w * inv_two_pi);
    j["omega_hz"] = std::move(omega_hz);
    j["u"] = result.u;
    j["v"] = result.v;
    return j;
}

void write_chsh_csv(std::ostream& out, const std::vector<ChshCurve>& curves,
                    const json& resolved) {
    out << "# " << resolved.dump() << "\n";
    out << "n_ba,phi_e,s\n";
    for (const auto& curve : curves)
        for (std::size_t i = 0; i < curve.phi_e.size(); ++i)
            out << format_double(curve.n_ba) << "," << format_double(curve.phi_e[i]) << ","
                << format_double(curve.s[i]) << "\n";
}

json chsh_json(const std::vector<ChshCurve>& curves, const json& resolved) {
    json j;
    j["params"] = resolved;
    json list = json::array();
    for (const auto& curve : curves) {
        json c;
        c["n_ba"] = curve.n_ba;
        c["phi_e"] = curve.phi_e;
        c["s"] = curve.s;
        c["max_abs_s"] = curve.max_abs_s;
        c["argmax_phi_e"] = curve.argmax_phi;
        list.push_back(std::move(c));
    }
    j["curves"] = std::move(list);
    return j;
}

json rates_json(const RateBudget& budget, const json& resolved) {
    json j;
    j["params"] = resolved;
    json b;
    b["r_o_hz"] = json_number(budget.r_o);
    b["r_e_hz"] = json_number(budget.r_e);
    b["r_cc_hz"] = json_number(budget.r_cc);
    b["r_ac_hz"] = json_number(budget.r_ac);
    b["r_c_hz"] = json_number(budget.r_c);
    b["g2"] = json_number(budget.g2);
    b["xi_o"] = json_number(budget.xi_o);
    b["xi_e"] = json_number(budget.xi_e);
    b["fidelity_condition_ratio"] = json_number(budget.fidelity_ratio);
    j["budget"] = std::move(b);
    return j;
}

} // namespace eomsim
