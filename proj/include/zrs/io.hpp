#pragma once

#include <string>

#include "json.hpp"

#include "zrs/scatterers.hpp"

namespace zrs {

/// Scatterer configuration from JSON. Accepted shapes:
///   {"points": [[x, y, z], ...], "weights": [w, ...], "epsilon": 1e-12}
///   {"family": {"kind": "clustering", "params": {...}, "n": 10, "strict": false}}
/// Malformed documents raise BadParams.
ScattererSet scatterers_from_json(const nlohmann::json& doc);

/// `source` is inline JSON when its first non-blank character is '{',
/// otherwise a path to a JSON file.
nlohmann::json load_json_source(const std::string& source);

ScattererSet load_scatterers(const std::string& source);

nlohmann::json to_json(const AdmissibilityReport& report);

}  // namespace zrs
