#include "engage/kinematics.h"

#include <cmath>
#include <numbers>

namespace engage {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

PairGeometry pair_geometry(const AgentState& a, const AgentState& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double r = std::hypot(dx, dy);
    if (r < kCoincidenceFloor) throw CoincidentAgents("pair separation below resolution floor");

    PairGeometry g;
    g.r = r;
    g.lambda = std::atan2(dy, dx);
    g.delta_first = wrap_angle(a.gamma - g.lambda);
    g.delta_second = wrap_angle(b.gamma - g.lambda);
    g.v_r = b.v * std::cos(g.delta_second) - a.v * std::cos(g.delta_first);
    g.v_lambda = b.v * std::sin(g.delta_second) - a.v * std::sin(g.delta_first);
    g.lambda_dot = g.v_lambda / r;
    return g;
}

StateDerivative state_derivative(const AgentState& s, double accel) {
    if (s.v <= 0.0) return {0.0, 0.0, 0.0};
    return {s.v * std::cos(s.gamma), s.v * std::sin(s.gamma), accel / s.v};
}

double los_accel(const PairGeometry& pair, double a_first, double a_second) {
    return -2.0 * pair.v_r * pair.lambda_dot / pair.r
           - std::cos(pair.delta_first) / pair.r * a_first
           + std::cos(pair.delta_second) / pair.r * a_second;
}

TimeEstimate tgo_collision(const PairGeometry& pair) {
    if (pair.v_r >= 0.0) throw NotClosing("time-to-go undefined: pair is not closing");
    return {-pair.r / pair.v_r, std::abs(pair.lambda_dot) < kLosRateTolerance};
}

TimeEstimate tgo_deviated_pursuit(const PairGeometry& pair, double v_own,
                                  double v_target, bool steady) {
    if (v_own <= v_target)
        throw SpeedOrderViolation("deviated pursuit needs the own agent strictly faster");
    if (std::abs(pair.delta_first) >= kPi / 2.0)
        throw LeadAngleOutOfRange("own lead angle at or beyond 90 degrees");
    const double num = v_own + v_target * std::cos(pair.delta_second + pair.delta_first);
    const double value =
        pair.r / std::cos(pair.delta_first) * num / (v_own * v_own - v_target * v_target);
    return {value, steady};
}

double tgo_collision_rate(const PairGeometry& pair, double a_first, double a_second) {
    if (pair.v_r >= 0.0) throw NotClosing("time-to-go rate undefined: pair is not closing");
    // v_r_dot from differentiating Eq-style pair kinematics:
    //   v_r_dot = v_lambda^2 / r + sin(d1) a_first - sin(d2) a_second
    const double vr_dot = pair.v_lambda * pair.v_lambda / pair.r
                          + std::sin(pair.delta_first) * a_first
                          - std::sin(pair.delta_second) * a_second;
    return -1.0 + pair.r * vr_dot / (pair.v_r * pair.v_r);
}

double tgo_dp_rate(const PairGeometry& pair, double v_own, double v_target,
                   double a_own, double a_target) {
    if (v_own <= v_target)
        throw SpeedOrderViolation("deviated pursuit needs the own agent strictly faster");
    if (std::abs(pair.delta_first) >= kPi / 2.0)
        throw LeadAngleOutOfRange("own lead angle at or beyond 90 degrees");

    const double c1 = std::cos(pair.delta_first);
    const double s = pair.delta_second + pair.delta_first;
    const double num = v_own + v_target * std::cos(s);
    const double d1_dot = a_own / v_own - pair.lambda_dot;
    const double d2_dot = (v_target > 0.0 ? a_target / v_target : 0.0) - pair.lambda_dot;
    const double num_dot = -v_target * std::sin(s) * (d1_dot + d2_dot);
    return (pair.v_r * num + pair.r * num_dot + pair.r * num * std::tan(pair.delta_first) * d1_dot)
           / (c1 * (v_own * v_own - v_target * v_target));
}

}  // namespace engage
