#pragma once

#include <string>

#include "json.hpp"
#include "regfind/engine/decision.hpp"
#include "regfind/sim/calibrate.hpp"
#include "regfind/sim/replicate.hpp"
#include "regfind/sim/scenario.hpp"

// JSON codecs. Regimen indices are 1-based on the wire and 0-based in memory;
// cohorts and patients likewise. Decoders throw MalformedInputError naming the
// offending field.
namespace regfind::service {

using Json = nlohmann::ordered_json;

Json to_json(const engine::TrialConfig& config);
engine::TrialConfig config_from_json(const Json& j);

Json to_json(const sim::Scenario& scenario);
sim::Scenario scenario_from_json(const Json& j);

Json to_json(const sim::CalibrationGrid& grid);
sim::CalibrationGrid grid_from_json(const Json& j);

Json to_json(const engine::RegimenAssessment& a, int regimen);
Json to_json(const engine::DecisionTrace& trace);
engine::DecisionTrace trace_from_json(const Json& j);

Json to_json(const engine::TrialState& state);

Json to_json(const sim::OperatingCharacteristics& oc);

// Parses text, mapping parse errors to MalformedInputError.
Json parse(const std::string& text);
Json read_file(const std::string& path);

}  // namespace regfind::service
