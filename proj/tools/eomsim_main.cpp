#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eomsim/config.hpp"
#include "eomsim/detection.hpp"
#include "eomsim/entanglement.hpp"
#include "eomsim/io.hpp"
#include "eomsim/network.hpp"
#include "eomsim/sweep.hpp"

namespace {

using eomsim::constants::two_pi;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_unstable = 3;
constexpr int exit_numerical = 4;

struct unstable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string out_path; // empty: stdout
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool need_config = true) {
    auto* config = cmd->add_option("--config", opts.config_path, "JSON run configuration");
    if (need_config) config->required();
    cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
    out << text;
}

eomsim::LinearNetwork stable_network(const eomsim::SystemParams& params) {
    const eomsim::LinearNetwork network = eomsim::build_network(params);
    const eomsim::StabilityReport report = eomsim::stability(network);
    if (!report.stable || !(report.pdc_margin > 1e-9))
        throw unstable_error("operating point is unstable (pdc margin " +
                             eomsim::format_double(report.pdc_margin) + ")");
    return network;
}

std::vector<double> sideband_grid(const eomsim::LinearNetwork& network,
                                  std::optional<double> span_hz, int points) {
    double span = span_hz ? *span_hz * two_pi : 0.0;
    if (!span_hz) span = 20.0 * eomsim::effective_linewidths(network).front();
    return eomsim::symmetric_grid(span, points);
}

struct GridSpec {
    int nx = 50;
    int ny = 50;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec spec;
    const auto sep = text.find('x');
    if (sep == std::string::npos) throw CLI::ValidationError("--grid expects <nx>x<ny>");
    try {
        spec.nx = std::stoi(text.substr(0, sep));
        spec.ny = std::stoi(text.substr(sep + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid expects <nx>x<ny>");
    }
    if (spec.nx < 2 || spec.ny < 2) throw CLI::ValidationError("--grid needs at least 2x2");
    return spec;
}

json axes_json(const eomsim::Axis& x, const eomsim::Axis& y) {
    json j;
    j["x"] = {{"name", x.name}, {"scale", x.log_scale ? "log" : "linear"}, {"min", x.min},
              {"max", x.max},   {"count", x.count}};
    j["y"] = {{"name", y.name}, {"scale", y.log_scale ? "log" : "linear"}, {"min", y.min},
              {"max", y.max},   {"count", y.count}};
    return j;
}

void emit_sweep(const CommonOptions& opts, const eomsim::SweepGrid& grid, const json& resolved) {
    std::ostringstream text;
    if (opts.format == "csv") {
        eomsim::write_sweep_csv(text, grid, resolved);
    } else {
        text << eomsim::sweep_json(grid, resolved).dump(2) << "\n";
    }
    emit(opts, text.str());
}

// Reads a sweep CSV produced by the map commands back into a field grid.
struct LoadedField {
    eomsim::Axis x;
    eomsim::Axis y;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
};

LoadedField load_field_csv(const std::string& path, const std::string& field) {
    std::ifstream in(path);
    if (!in) throw eomsim::config_error("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw eomsim::config_error("input is missing the parameter comment line");
    json meta;
    try {
        meta = json::parse(line.substr(2));
    } catch (const json::parse_error&) {
        throw eomsim::config_error("input comment line is not valid JSON");
    }
    if (!meta.count("grid")) throw eomsim::config_error("input has no grid description");

    const auto axis_from = [](const json& a) {
        eomsim::Axis axis;
        axis.name = a.at("name").get<std::string>();
        axis.log_scale = a.at("scale").get<std::string>() == "log";
        axis.min = a.at("min").get<double>();
        axis.max = a.at("max").get<double>();
        axis.count = a.at("count").get<int>();
        return axis;
    };
    LoadedField loaded;
    loaded.x = axis_from(meta.at("grid").at("x"));
    loaded.y = axis_from(meta.at("grid").at("y"));

    if (!std::getline(in, line)) throw eomsim::config_error("input is missing the header row");
    std::vector<std::string> columns;
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) columns.push_back(cell);
    int field_col = -1;
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == field) field_col = static_cast<int>(i);
    if (field_col < 0) throw eomsim::config_error("field '" + field + "' not found in input");

    const std::size_t cells = static_cast<std::size_t>(loaded.x.count) * loaded.y.count;
    loaded.values.assign(cells, 0.0);
    loaded.valid.assign(cells, 0);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= cells) throw std::runtime_error("input has more rows than grid cells");
        std::stringstream parts(line);
        std::vector<std::string> tokens;
        while (std::getline(parts, cell, ',')) tokens.push_back(cell);
        // a trailing empty cell is dropped by getline; status is last column
        while (tokens.size() < columns.size()) tokens.push_back("");
        if (tokens.back() == "ok") {
            loaded.values[row] = std::stod(tokens[field_col]);
            loaded.valid[row] = 1;
        }
        ++row;
    }
    if (row != cells) throw std::runtime_error("input has fewer rows than grid cells");
    return loaded;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"cavity electro-optomechanical entanglement source simulator"};
    app.require_subcommand(1);

    // spectrum
    CommonOptions spectrum_opts;
    std::optional<double> spectrum_span;
    int spectrum_points = 2001;
    auto* cmd_spectrum =
        app.add_subcommand("spectrum", "output power spectra u(w), v(w) on a sideband grid");
    add_common(cmd_spectrum, spectrum_opts);
    cmd_spectrum->add_option("--omega-span", spectrum_span,
                             "half-width of the sideband window, Hz (default: 20 linewidths)");
    cmd_spectrum->add_option("--omega-points", spectrum_points, "grid points")
        ->check(CLI::Range(9, 100000000));

    // map-ef
    CommonOptions ef_opts;
    std::string ef_grid = "50x50";
    double ef_xmin = 0.1, ef_xmax = 60.0, ef_ymin = 1.0, ef_ymax = 1000.0;
    auto* cmd_ef = app.add_subcommand(
        "map-ef", "entanglement of formation and purity over cooperativity x readout ratio");
    add_common(cmd_ef, ef_opts);
    cmd_ef->add_option("--grid", ef_grid, "<nx>x<ny> (default 50x50)");
    cmd_ef->add_option("--x-min", ef_xmin, "C_om axis minimum");
    cmd_ef->add_option("--x-max", ef_xmax, "C_om axis maximum");
    cmd_ef->add_option("--y-min", ef_ymin, "readout ratio axis minimum");
    cmd_ef->add_option("--y-max", ef_ymax, "readout ratio axis maximum");

    // map-thresholds
    CommonOptions th_opts;
    std::string th_grid = "50x50";
    double th_xmin = 0.1, th_xmax = 60.0, th_ymin = 1.0, th_ymax = 1000.0;
    std::optional<double> th_nba;
    double th_eta_o = 0.5, th_eta_e = 0.5;
    auto* cmd_th = app.add_subcommand(
        "map-thresholds", "fidelity lower bound and max CHSH value with threshold contours");
    add_common(cmd_th, th_opts);
    cmd_th->add_option("--grid", th_grid, "<nx>x<ny> (default 50x50)");
    cmd_th->add_option("--x-min", th_xmin, "C_om axis minimum");
    cmd_th->add_option("--x-max", th_xmax, "C_om axis maximum");
    cmd_th->add_option("--y-min", th_ymin, "readout ratio axis minimum");
    cmd_th->add_option("--y-max", th_ymax, "readout ratio axis maximum");
    cmd_th->add_option("--nba", th_nba, "bath occupancy (default: from config)");
    cmd_th->add_option("--eta-o", th_eta_o, "optical measurement efficiency");
    cmd_th->add_option("--eta-e", th_eta_e, "microwave measurement efficiency");

    // chsh-curve
    CommonOptions chsh_opts;
    std::vector<double> chsh_nba;
    int chsh_points = 721;
    double chsh_eta_o = 0.5, chsh_eta_e = 0.5;
    auto* cmd_chsh =
        app.add_subcommand("chsh-curve", "S(0, phi_e; pi/2, phi_e + pi/2) for varied thermal noise");
    add_common(cmd_chsh, chsh_opts);
    cmd_chsh->add_option("--nba", chsh_nba, "bath occupancies (default: from config)")
        ->delimiter(',');
    cmd_chsh->add_option("--phi-points", chsh_points, "phase grid points over [0, 2 pi]")
        ->check(CLI::Range(9, 10000000));
    cmd_chsh->add_option("--eta-o", chsh_eta_o, "optical measurement efficiency");
    cmd_chsh->add_option("--eta-e", chsh_eta_e, "microwave measurement efficiency");

    // rates
    CommonOptions rates_opts;
    std::optional<double> rates_span;
    int rates_points = 80001;
    auto* cmd_rates = app.add_subcommand("rates", "photon counting-rate budget (JSON)");
    add_common(cmd_rates, rates_opts);
    cmd_rates->add_option("--omega-span", rates_span,
                          "half-width of the sideband window, Hz (default: 20 linewidths)");
    cmd_rates->add_option("--omega-points", rates_points, "grid points")
        ->check(CLI::Range(9, 100000000));

    // contour
    CommonOptions contour_opts;
    std::string contour_in, contour_field;
    double contour_level = 0.0;
    auto* cmd_contour =
        app.add_subcommand("contour", "extract a level-set polyline from a map CSV");
    add_common(cmd_contour, contour_opts, /*need_config=*/false);
    cmd_contour->add_option("--in", contour_in, "map CSV produced by map-ef/map-thresholds")
        ->required();
    cmd_contour->add_option("--field", contour_field, "field column to contour")->required();
    cmd_contour->add_option("--level", contour_level, "contour level")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_spectrum->parsed()) {
        const eomsim::RunConfig config = eomsim::load_run_config(spectrum_opts.config_path);
        const eomsim::LinearNetwork network = stable_network(config.params);
        const auto grid = sideband_grid(network, spectrum_span, spectrum_points);
        const eomsim::SpectrumResult result =
            eomsim::spectrum(network, grid, network.derived.n_ba);
        json resolved = eomsim::params_json(config.params, network.derived);
        resolved["command"] = "spectrum";
        resolved["omega_points"] = spectrum_points;
        resolved["omega_span_hz"] = grid.back() / two_pi;
        std::ostringstream text;
        if (spectrum_opts.format == "csv")
            eomsim::write_spectrum_csv(text, result, resolved);
        else
            text << eomsim::spectrum_json(result, resolved).dump(2) << "\n";
        emit(spectrum_opts, text.str());
        return exit_ok;
    }

    if (cmd_ef->parsed()) {
        const eomsim::RunConfig config = eomsim::load_run_config(ef_opts.config_path);
        const GridSpec spec = parse_grid(ef_grid);
        const eomsim::Axis x{"c_om", true, ef_xmin, ef_xmax, spec.nx};
        const eomsim::Axis y{"kappa_ec_over_ei", true, ef_ymin, ef_ymax, spec.ny};
        const eomsim::SweepGrid grid = eomsim::map_entanglement(config.params, x, y);
        if (!grid.any_stable()) throw unstable_error("every grid cell is unstable");
        json resolved = eomsim::params_json(config.params, eomsim::derive(config.params));
        resolved["command"] = "map-ef";
        resolved["grid"] = axes_json(x, y);
        emit_sweep(ef_opts, grid, resolved);
        return exit_ok;
    }

    if (cmd_th->parsed()) {
        const eomsim::RunConfig config = eomsim::load_run_config(th_opts.config_path);
        const GridSpec spec = parse_grid(th_grid);
        const eomsim::DerivedParams derived = eomsim::derive(config.params);
        const double n_ba = th_nba ? *th_nba : derived.n_ba;
        const eomsim::Axis x{"c_om", true, th_xmin, th_xmax, spec.nx};
        const eomsim::Axis y{"kappa_ec_over_ei", true, th_ymin, th_ymax, spec.ny};
        const eomsim::SweepGrid grid =
            eomsim::map_thresholds(config.params, x, y, n_ba, th_eta_o, th_eta_e);
        if (!grid.any_stable()) throw unstable_error("every grid cell is unstable");
        json resolved = eomsim::params_json(config.params, derived);
        resolved["command"] = "map-thresholds";
        resolved["grid"] = axes_json(x, y);
        resolved["n_ba"] = n_ba;
        resolved["eta_o"] = th_eta_o;
        resolved["eta_e"] = th_eta_e;
        emit_sweep(th_opts, grid, resolved);
        return exit_ok;
    }

    if (cmd_chsh->parsed()) {
        const eomsim::RunConfig config = eomsim::load_run_config(chsh_opts.config_path);
        const eomsim::DerivedParams derived = eomsim::derive(config.params);
        if (!(derived.pdc_margin > 1e-9))
            throw unstable_error("operating point is unstable");
        std::vector<double> phi(chsh_points);
        for (int i = 0; i < chsh_points; ++i) phi[i] = two_pi * i / (chsh_points - 1);
        const std::vector<double> nba_list =
            chsh_nba.empty() ? std::vector<double>{derived.n_ba} : chsh_nba;
        const auto curves =
            eomsim::chsh_curve(config.params, phi, nba_list, chsh_eta_o, chsh_eta_e);
        for (const auto& curve : curves)
            std::cerr << "n_ba=" << eomsim::format_double(curve.n_ba)
                      << " max|S|=" << eomsim::format_double(curve.max_abs_s)
                      << " at phi_e=" << eomsim::format_double(curve.argmax_phi) << "\n";
        json resolved = eomsim::params_json(config.params, derived);
        resolved["command"] = "chsh-curve";
        resolved["eta_o"] = chsh_eta_o;
        resolved["eta_e"] = chsh_eta_e;
        std::ostringstream text;
        if (chsh_opts.format == "csv")
            eomsim::write_chsh_csv(text, curves, resolved);
        else
            text << eomsim::chsh_json(curves, resolved).dump(2) << "\n";
        emit(chsh_opts, text.str());
        return exit_ok;
    }

    if (cmd_rates->parsed()) {
        const eomsim::RunConfig config = eomsim::load_run_config(rates_opts.config_path);
        if (!config.detectors)
            throw eomsim::config_error("rates requires a 'detectors' block in the config");
        const eomsim::LinearNetwork network = stable_network(config.params);
        const auto grid = sideband_grid(network, rates_span, rates_points);
        const eomsim::GenerationRates rates =
            eomsim::generation_rates(network, network.derived.n_ba, grid);
        const eomsim::RateBudget budget =
            eomsim::rate_budget(rates, config.detectors->optical, config.detectors->microwave);
        json resolved = eomsim::params_json(config.params, network.derived);
        resolved["command"] = "rates";
        resolved["omega_points"] = rates_points;
        resolved["omega_span_hz"] = grid.back() / two_pi;
        resolved["window_s"] = config.detectors->optical.window;
        emit(rates_opts, eomsim::rates_json(budget, resolved).dump(2) + "\n");
        return exit_ok;
    }

    if (cmd_contour->parsed()) {
        const LoadedField loaded = load_field_csv(contour_in, contour_field);
        const auto polylines =
            eomsim::extract_contour(loaded.x, loaded.y, loaded.values, loaded.valid, contour_level);
        json resolved;
        resolved["command"] = "contour";
        resolved["input"] = contour_in;
        resolved["field"] = contour_field;
        resolved["level"] = contour_level;
        std::ostringstream text;
        if (contour_opts.format == "csv") {
            eomsim::write_contours_csv(text, contour_field, polylines, resolved);
        } else {
            json j;
            j["params"] = resolved;
            json list = json::array();
            for (const auto& polyline : polylines) {
                json points = json::array();
                for (const auto& p : polyline) points.push_back({p.x, p.y});
                list.push_back(std::move(points));
            }
            j["polylines"] = std::move(list);
            text << j.dump(2) << "\n";
        }
        emit(contour_opts, text.str());
        return exit_ok;
    }

    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const eomsim::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const unstable_error& e) {
        std::cerr << "unstable: " << e.what() << "\n";
        return exit_unstable;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
}
