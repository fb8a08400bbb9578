#pragma once

#include <array>
#include <string>

#include "engage/guidance.h"
#include "engage/observer.h"

namespace engage {

enum class Method { RK4, Euler };

struct SimSettings {
    double dt = 1e-3;                 // s, integration step
    Method method = Method::RK4;
    double capture_radius = 1.0;      // m
    double max_time = 70.0;           // s
    double los_rate_tolerance = 1e-6; // rad/s, collision-course test
    double manifold_tolerance = 0.01; // per-sigma units, convergence test
};

struct AgentConfig {
    AgentState state;
    double a_max = 40.0 * kGravity;  // m/s^2
};

struct ObserverConfig {
    bool enabled = false;  // disabled = perfect information, a_p_hat = true a_P
    ObserverGains gains;
    Z1LinearGain z1_linear_gain = Z1LinearGain::H2;
};

// Index into the per-law gain table.
enum LawIndex { kSigma1 = 0, kSigma2, kSigma3, kSigma4, kSigma5 };

struct ScenarioConfig {
    std::string name = "scenario";
    AgentConfig evader;
    AgentConfig pursuer;
    AgentConfig defender;
    GuidanceMode mode;
    PursuerStrategy pursuer_strategy;
    std::array<SmcGains, 5> gains = default_gain_table();
    ObserverConfig observer;
    SimSettings sim;

    static std::array<SmcGains, 5> default_gain_table();
};

// Validates everything checkable before the first step: gain constraints,
// speed ordering for the stance, timing-field population, settings ranges,
// distinct initial positions, lead-angle guards for the active laws, and a
// closing evader-pursuer pair where direct cooperation requires it. Throws
// ValidationError or LeadAngleSingular.
void validate_config(const ScenarioConfig& config);

void validate_settings(const SimSettings& settings);

// Gain-table row of the defender law selected by the mode.
LawIndex active_defender_law(const GuidanceMode& mode);

// "sigma1" .. "sigma5", as used in summaries and gain-block labels.
const char* law_label(LawIndex law);

}  // namespace engage
