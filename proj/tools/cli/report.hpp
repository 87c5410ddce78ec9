#pragma once

// JSON and CSV emission for experiment results.

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "cwx/shadowing.hpp"
#include "cwx/stability.hpp"

namespace cwx::cli {

using Json = nlohmann::ordered_json;

Json to_json(const ExperimentConfig& cfg);
Json to_json(const StabilityReport& r);
Json to_json(const EscapeCertificate& c, double xi);
Json to_json(const PseudoOrbit<TorusPoint>& po);
Json to_json(const PseudoOrbit<SpherePoint>& po);
Json to_json(const TorusShadow& s, bool verified);
Json to_json(const SphereShadow& s, bool verified);
Json to_json(const AreaStats& s);

/// CSV field for a double: 17 significant digits.
std::string csv_num(double v);

/// Writes text to dir/name, creating dir; returns the path.
std::string write_output(const std::string& dir, const std::string& name, const std::string& text);

/// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace cwx::cli
