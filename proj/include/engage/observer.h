#pragma once

#include "engage/kinematics.h"

namespace engage {

// The disturbance estimate divides by cos of the pursuer lead angle; the
// divisor is floored here to keep the estimate bounded through beam-aspect
// geometry.
inline constexpr double kEstimateCosFloor = 1e-2;

struct ObserverGains {
    double g0 = 0.01;       // sign-term gains, innermost to outermost
    double g1 = 0.05;
    double g2 = 1.3;
    double h0 = 0.005;      // linear damping gains
    double h1 = 3.25;
    double h2 = 3.3;
    double lipschitz = 0.5; // bound L on the disturbance derivative, m/s^3
};

// Which linear gain damps the middle (z1) stage. The published cascade reuses
// h2 there even though the gain ladder suggests h1; both are supported and h2
// is the default.
enum class Z1LinearGain { H2, H1 };

// Three-state finite-time cascade tracking the pursuer-evader transverse
// relative speed. z0 tracks v_lambda, z1 the lumped disturbance
// cos(delta_PE) * a_P, z2 its derivative. v0/v1 are the stage corrections
// computed on the way; they are recorded for inspection, not integrated.
struct ObserverState {
    double z0 = 0.0;  // m/s
    double z1 = 0.0;  // m/s^2
    double z2 = 0.0;  // m/s^3
    double v0 = 0.0;
    double v1 = 0.0;
};

struct ObserverDerivative {
    double z0_dot;
    double z1_dot;
    double z2_dot;
    double v0;  // corrections evaluated at this state, passed back so the
    double v1;  // caller can store them alongside the integrated states
};

// Throws ValidationError unless g2 > g1 > g0 > 0, h2 > h1 > h0 > 0, L > 0.
void validate_observer_gains(const ObserverGains& gains);

// Initial state at measurement: z0 seeded from the measured geometry, zero
// disturbance prior.
ObserverState observer_init(const PairGeometry& pair_ep);

// One derivative evaluation against the current EP geometry and the evader's
// applied acceleration. measured_los_rate is the plant's LOS rate; the
// cascade works at transverse-speed level, so the measurement enters as
// measured_los_rate * r. Throws NonFiniteState on non-finite inputs.
ObserverDerivative observer_derivative(const ObserverState& s, double measured_los_rate,
                                       const PairGeometry& pair_ep, double a_e,
                                       const ObserverGains& gains,
                                       Z1LinearGain z1_gain = Z1LinearGain::H2);

// Raw disturbance state.
double estimate(const ObserverState& s);

// Pursuer lateral acceleration implied by the disturbance state and the
// current geometry: z1 / cos(delta_PE), with the divisor floored.
double estimate_pursuer_accel(const ObserverState& s, const PairGeometry& pair_ep);

}  // namespace engage
