#pragma once

#include <optional>
#include <vector>

#include "engage/config.h"

namespace engage {

enum class Outcome {
    DefenderInterceptedPursuer,
    DefenderRendezvousedEvader,
    PursuerCapturedEvader,
    Timeout,
    NumericalFailure,
};

// snake_case name used in summaries and CLI output.
const char* outcome_name(Outcome o);

// Mission success means the defender's stance objective was met: intercept in
// the aggressive stance, rendezvous in the defensive one.
bool mission_success(Outcome o, Stance stance);

// One sample per integration step, taken before the step is applied.
// Degenerate pairs (co-located agents, e.g. the defender-evader pair at an
// aggressive launch) are recorded zero-filled.
struct TraceRecord {
    double t = 0.0;
    AgentState evader, pursuer, defender;
    PairGeometry ep, dp, de;
    double evader_accel_raw = 0.0, evader_accel = 0.0;
    double pursuer_accel_raw = 0.0, pursuer_accel = 0.0;
    double defender_accel_raw = 0.0, defender_accel = 0.0;
    double sigma_evader = 0.0;    // rad/s
    double sigma_defender = 0.0;  // s
    double tgo_ep = 0.0;          // s, NaN while the pair is not closing
    double tgo_defender = 0.0;    // s, for the stance's defender pair
    double a_p_hat = 0.0;         // m/s^2, estimate fed to the laws
};

struct Geometries {
    std::optional<PairGeometry> ep, dp, de;
};

enum class EventPairId { DP, DE, EP };

struct EventHit {
    EventPairId pair;
    double frac;  // position of the crossing within the step, [0, 1]
};

// First pair whose range crosses the capture radius from above within the
// step; defender pairs are checked before EP so a defender success wins ties.
std::optional<EventHit> detect_event(const Geometries& prev, const Geometries& curr,
                                     const SimSettings& settings);

struct SimResult {
    Outcome outcome = Outcome::Timeout;
    double event_time = 0.0;  // s, linearly interpolated within the final step
    Geometries final_geometries;
    // r_EP interpolated at the event, or the minimum over the run for
    // timeout/failure outcomes.
    double evader_miss_distance = 0.0;
    std::vector<TraceRecord> trace;
};

// Fixed-step deterministic run: per step, commands are computed once and held
// across the integrator stages; the observer (when enabled) is integrated
// with the same method and step as the plant.
SimResult run_scenario(const ScenarioConfig& config, const SimSettings& settings);

// Convenience overload using the settings embedded in the config.
SimResult run_scenario(const ScenarioConfig& config);

}  // namespace engage
