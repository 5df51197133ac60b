#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "eomsim/detection.hpp"
#include "eomsim/network.hpp"
#include "eomsim/sweep.hpp"

namespace eomsim {

/// Shortest decimal representation that round-trips the double.
std::string format_double(double value);

nlohmann::json params_json(const SystemParams& params, const DerivedParams& derived);

void write_sweep_csv(std::ostream& out, const SweepGrid& grid, const nlohmann::json& resolved);
nlohmann::json sweep_json(const SweepGrid& grid, const nlohmann::json& resolved);

void write_contours_csv(std::ostream& out, const std::string& name,
                        const std::vector<Polyline>& polylines, const nlohmann::json& resolved);

void write_spectrum_csv(std::ostream& out, const SpectrumResult& result,
                        const nlohmann::json& resolved);
nlohmann::json spectrum_json(const SpectrumResult& result, const nlohmann::json& resolved);

void write_chsh_csv(std::ostream& out, const std::vector<ChshCurve>& curves,
                    const nlohmann::json& resolved);
nlohmann::json chsh_json(const std::vector<ChshCurve>& curves, const nlohmann::json& resolved);

nlohmann::json rates_json(const RateBudget& budget, const nlohmann::json& resolved);

} // namespace eomsim
