#include "eomsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eomsim {

namespace {

using nlohmann::json;

double number_at(const json& j, const std::string& key) {
    if (!j.count(key)) throw config_error("missing required config key '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw config_error("config key '" + key + "' must be a number");
    return v.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& scope) {
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key))
            throw config_error("unknown config key '" + scope + key + "'");
    }
}

DetectorModel parse_detector(const json& j, double window, const std::string& scope) {
    reject_unknown(j, {"eta", "transmissivity", "dark_rate_hz"}, scope);
    DetectorModel d;
    d.eta = number_at(j, "eta");
    d.transmissivity = number_at(j, "transmissivity");
    d.dark_rate = j.count("dark_rate_hz") ? number_at(j, "dark_rate_hz") : 0.0;
    d.window = window;
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(scope + e.what());
    }
    return d;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    const std::set<std::string> known = {
        "g_em_hz",      "g_om0_hz",     "n_pump",       "c_om",
        "kappa_o_i_hz", "kappa_o_c_hz", "kappa_e_i_hz", "kappa_e_c_hz",
        "kappa_m_hz",   "omega_m_hz",   "omega_e_hz",   "omega_o_hz",
        "delta_p_hz",   "temperature_k", "n_ba_override", "detectors"};
    reject_unknown(j, known, "");

    const double tp = constants::two_pi;
    RunConfig config;
    SystemParams& p = config.params;
    p.g_em = tp * number_at(j, "g_em_hz");
    p.g_om0 = tp * number_at(j, "g_om0_hz");
    p.kappa_o_i = tp * number_at(j, "kappa_o_i_hz");
    p.kappa_o_c = tp * number_at(j, "kappa_o_c_hz");
    p.kappa_e_i = tp * number_at(j, "kappa_e_i_hz");
    p.kappa_e_c = tp * number_at(j, "kappa_e_c_hz");
    p.kappa_m = tp * number_at(j, "kappa_m_hz");
    p.omega_m = tp * number_at(j, "omega_m_hz");
    p.omega_e = tp * number_at(j, "omega_e_hz");
    p.omega_o = tp * number_at(j, "omega_o_hz");
    p.delta_p = j.count("delta_p_hz") ? tp * number_at(j, "delta_p_hz") : p.omega_m;
    p.temperature = number_at(j, "temperature_k");
    if (j.count("n_ba_override")) p.n_ba_override = number_at(j, "n_ba_override");

    const bool has_pump = j.count("n_pump") > 0;
    const bool has_c_om = j.count("c_om") > 0;
    if (has_pump == has_c_om)
        throw config_error("config must specify exactly one of 'n_pump' or 'c_om'");
    if (has_pump) {
        p.n_pump = number_at(j, "n_pump");
    } else {
        try {
            p.n_pump = required_pump_photons(p, number_at(j, "c_om"));
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
    }

    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }

    if (j.count("detectors")) {
        const json& d = j.at("detectors");
        if (!d.is_object()) throw config_error("'detectors' must be an object");
        reject_unknown(d, {"optical", "microwave", "window_s"}, "detectors.");
        if (!d.count("optical") || !d.count("microwave") || !d.count("window_s"))
            throw config_error("'detectors' requires 'optical', 'microwave' and 'window_s'");
        const double window = number_at(d, "window_s");
        DetectorPair pair;
        pair.optical = parse_detector(d.at("optical"), window, "detectors.optical.");
        pair.microwave = parse_detector(d.at("microwave"), window, "detectors.microwave.");
        config.detectors = pair;
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

} // namespace eomsim
