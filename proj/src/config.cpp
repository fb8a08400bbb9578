#include "engage/config.h"

#include <cmath>
#include <numbers>

namespace engage {

std::array<SmcGains, 5> ScenarioConfig::default_gain_table() {
    // zeta, xi, alpha, beta, kappa, epsilon, phi
    return {{
        {0.05, 0.005, 0.2, 2.0, 1.0, 0.5, 0.0},  // sigma1 (evader)
        {0.005, 0.5, 0.3, 2.0, 1.0, 0.5, 0.0},   // sigma2
        {0.005, 0.5, 0.3, 2.0, 1.0, 0.5, 0.0},   // sigma3
        {0.05, 25.0, 0.3, 2.0, 1.0, 0.5, 0.0},   // sigma4
        {0.05, 25.0, 0.3, 2.0, 1.0, 0.5, 0.0},   // sigma5
    }};
}

void validate_settings(const SimSettings& s) {
    if (!(s.dt > 0.0)) throw ValidationError("sim.dt must be positive");
    if (!(s.capture_radius > 0.0)) throw ValidationError("sim.capture_radius must be positive");
    if (!(s.max_time > s.dt)) throw ValidationError("sim.max_time must exceed sim.dt");
    if (!(s.los_rate_tolerance > 0.0))
        throw ValidationError("sim.los_rate_tolerance must be positive");
    if (!(s.manifold_tolerance > 0.0))
        throw ValidationError("sim.manifold_tolerance must be positive");
}

void validate_config(const ScenarioConfig& c) {
    static const char* kLabels[5] = {"gains.sigma1", "gains.sigma2", "gains.sigma3",
                                     "gains.sigma4", "gains.sigma5"};
    for (int i = 0; i < 5; ++i) validate_smc_gains(c.gains[i], kLabels[i]);
    if (c.observer.enabled) validate_observer_gains(c.observer.gains);
    validate_settings(c.sim);

    if (c.evader.state.v < 0.0 || c.pursuer.state.v < 0.0 || c.defender.state.v < 0.0)
        throw ValidationError("agent speeds must be non-negative");
    if (!(c.evader.a_max > 0.0 && c.pursuer.a_max > 0.0 && c.defender.a_max > 0.0))
        throw ValidationError("acceleration limits must be positive");
    if (!(c.pursuer_strategy.a_max > 0.0))
        throw ValidationError("pursuer strategy acceleration limit must be positive");
    if (c.pursuer_strategy.kind != PursuerKind::Scripted && !(c.pursuer_strategy.nav_gain > 0.0))
        throw ValidationError("pursuer navigation gain must be positive");

    const bool aggressive = c.mode.stance == Stance::Aggressive;
    if (aggressive && !(c.defender.state.v > c.pursuer.state.v))
        throw ValidationError("speed ordering: aggressive defender must outpace the pursuer");
    if (!aggressive && !(c.defender.state.v > c.evader.state.v))
        throw ValidationError("speed ordering: defensive defender must outpace the evader");

    const bool indirect = c.mode.cooperation == Cooperation::Indirect;
    if (indirect) {
        if (!(std::isfinite(c.mode.impact_time) && c.mode.impact_time > 0.0))
            throw ValidationError("indirect cooperation requires a positive impact_time");
        if (std::isfinite(c.mode.time_margin))
            throw ValidationError("indirect cooperation must not set time_margin");
    } else {
        if (!(std::isfinite(c.mode.time_margin) && c.mode.time_margin > 0.0))
            throw ValidationError("direct cooperation requires a positive time_margin");
        if (std::isfinite(c.mode.impact_time))
            throw ValidationError("direct cooperation must not set impact_time");
    }

    PairGeometry ep;
    try {
        ep = pair_geometry(c.evader.state, c.pursuer.state);
    } catch (const CoincidentAgents&) {
        throw ValidationError("evader and pursuer start coincident");
    }
    PairGeometry own;
    try {
        own = aggressive ? pair_geometry(c.defender.state, c.pursuer.state)
                         : pair_geometry(c.defender.state, c.evader.state);
    } catch (const CoincidentAgents&) {
        throw ValidationError(aggressive ? "defender and pursuer start coincident"
                                         : "defensive defender must start away from the evader");
    }

    const double guard = kLeadAngleGuardDeg * std::numbers::pi / 180.0;
    if (std::abs(ep.delta_first) >= guard)
        throw LeadAngleSingular("evader lead angle at or beyond the 89.9 degree guard");
    if (std::abs(own.delta_first) >= guard)
        throw LeadAngleSingular("defender lead angle at or beyond the 89.9 degree guard");

    if (c.mode.cooperation == Cooperation::Direct && !(ep.v_r < 0.0))
        throw ValidationError(
            "direct cooperation requires a closing evader-pursuer pair at launch");
}

LawIndex active_defender_law(const GuidanceMode& mode) {
    if (mode.stance == Stance::Aggressive)
        return mode.cooperation == Cooperation::Indirect ? kSigma2 : kSigma3;
    return mode.cooperation == Cooperation::Indirect ? kSigma4 : kSigma5;
}

const char* law_label(LawIndex law) {
    switch (law) {
        case kSigma1: return "sigma1";
        case kSigma2: return "sigma2";
        case kSigma3: return "sigma3";
        case kSigma4: return "sigma4";
        case kSigma5: return "sigma5";
    }
    return "sigma?";
}

}  // namespace engage
