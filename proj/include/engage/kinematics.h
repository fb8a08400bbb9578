#pragma once

#include "engage/errors.h"

namespace engage {

// Separations below this are treated as coincident, not as a valid pair.
inline constexpr double kCoincidenceFloor = 1e-9;  // m

// |lambda_dot| below this counts as a collision course for the exactness flag.
inline constexpr double kLosRateTolerance = 1e-6;  // rad/s

struct AgentState {
    double x = 0.0;      // m
    double y = 0.0;      // m
    double gamma = 0.0;  // heading, rad, wrapped to (-pi, pi]
    double v = 0.0;      // speed, m/s, constant over a run (0 = static agent)
};

// Relative geometry of an ordered pair of agents. The first-named agent plays
// the target role of the pair (EP, DP, DE ordering); signs follow from that.
struct PairGeometry {
    double r = 0.0;             // separation, m
    double lambda = 0.0;        // LOS angle, rad
    double delta_first = 0.0;   // lead angle of the first agent off the LOS, rad
    double delta_second = 0.0;  // lead angle of the second agent, rad
    double v_r = 0.0;           // range rate, m/s (negative = closing)
    double v_lambda = 0.0;      // transverse relative speed, m/s
    double lambda_dot = 0.0;    // LOS rate, rad/s (= v_lambda / r)
};

struct StateDerivative {
    double x_dot;      // m/s
    double y_dot;      // m/s
    double gamma_dot;  // rad/s (= accel / v)
};

struct TimeEstimate {
    double value;  // s, always positive
    bool exact;    // formula exact under the assumptions in force
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Builds the relative geometry; throws CoincidentAgents below the separation
// floor.
PairGeometry pair_geometry(const AgentState& a, const AgentState& b);

// Planar constant-speed point mass under lateral acceleration. A zero-speed
// agent is static: all derivative components are zero and accel is ignored.
StateDerivative state_derivative(const AgentState& s, double accel);

// LOS-rate derivative:
//   lambda_ddot = -2 v_r lambda_dot / r
//                 - (cos delta_first / r) a_first + (cos delta_second / r) a_second
double los_accel(const PairGeometry& pair, double a_first, double a_second);

// Collision-course time-to-go, -r / v_r. Throws NotClosing when v_r >= 0.
// exact is set when the pair is on a collision course (|lambda_dot| below the
// LOS-rate tolerance); otherwise the value is an estimate.
TimeEstimate tgo_collision(const PairGeometry& pair);

// Deviated-pursuit time-to-go for the first-named (own) agent against the
// second (target):
//   r sec(d1) [v_own + v_target cos(d2 + d1)] / (v_own^2 - v_target^2)
// Throws SpeedOrderViolation unless v_own > v_target and LeadAngleOutOfRange
// unless |delta_first| < pi/2. steady asserts the target is non-maneuvering
// and the lead angle held constant, which makes the value exact.
TimeEstimate tgo_deviated_pursuit(const PairGeometry& pair, double v_own,
                                  double v_target, bool steady = true);

// Analytic rate of tgo_collision under the given lateral accelerations.
// Verification-suite companion to the finite-difference oracle; throws
// NotClosing like tgo_collision.
double tgo_collision_rate(const PairGeometry& pair, double a_first, double a_second);

// Analytic rate of tgo_deviated_pursuit; same preconditions, plus the own
// agent needs v_own > 0 (a static target contributes no turn-rate term).
double tgo_dp_rate(const PairGeometry& pair, double v_own, double v_target,
                   double a_own, double a_target);

}  // namespace engage
