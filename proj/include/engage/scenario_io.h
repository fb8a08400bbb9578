#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "engage/engine.h"

namespace engage {

// Parses the sectioned key/value scenario format (see README for the key
// list), fills defaults, and returns a fully validated config. Unknown
// sections or keys and malformed values raise ParseError with the line
// number; invariant violations raise ValidationError.
ScenarioConfig parse_scenario(const std::string& text);

// Canonical serialization: positions as x/y, headings in radians, limits in
// m/s^2, full precision. parse_scenario(render_scenario(c)) reproduces c
// exactly.
std::string render_scenario(const ScenarioConfig& config);

// Built-in scenario presets, compiled in so tests never depend on loose
// files.
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

// CSV trace with a fixed column order (see kTraceHeader), one row per
// integration step, 9 significant digits.
extern const char* const kTraceHeader;
void write_trace(const SimResult& result, std::ostream& out);
std::vector<TraceRecord> read_trace(std::istream& in);

// Single JSON document: outcome, event time, miss distance, per-manifold
// convergence report, realized epsilon-sufficiency report, settings echo.
std::string write_summary(const SimResult& result, const ScenarioConfig& config);

}  // namespace engage
