#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "eomsim/detection.hpp"
#include "eomsim/params.hpp"

namespace eomsim {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DetectorPair {
    DetectorModel optical;
    DetectorModel microwave;
};

/// A run configuration: device parameters plus an optional detector block.
struct RunConfig {
    SystemParams params;
    std::optional<DetectorPair> detectors;
};

/// Parses the JSON run-configuration document. Frequencies and rates are
/// ordinary Hz in the file and converted to angular units here. Unknown
/// keys are rejected by name.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

} // namespace eomsim
