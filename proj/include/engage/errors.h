#pragma once

#include <stdexcept>
#include <string>

namespace engage {

// Geometry preconditions.
struct CoincidentAgents : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time-to-go requested for a pair that is not closing (v_r >= 0).
struct NotClosing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deviated-pursuit formulas require the own agent to be strictly faster.
struct SpeedOrderViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lead angle at or beyond 90 degrees where a sec/cos term is undefined.
struct LeadAngleOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Initial lead angle too close to 90 degrees for a guidance law; raised at
// configuration validation, never mid-run (mid-run values are clamped).
struct LeadAngleSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state or derivative stopped being finite.
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario text could not be read; message carries the line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

// Well-formed scenario text with values that violate a named invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace engage
