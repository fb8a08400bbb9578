#include "engage/guidance.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace engage {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// cos of a lead angle, floored in magnitude at the 89.9 degree guard with the
// sign preserved, so sec terms stay bounded through beam aspect.
double guarded_cos(double delta) {
    const double floor = std::cos(kLeadAngleGuardDeg * kPi / 180.0);
    const double c = std::cos(delta);
    if (std::abs(c) < floor) return c >= 0.0 ? floor : -floor;
    return c;
}

double smc_bracket(double sigma, const SmcGains& g) {
    const double m = std::abs(sigma);
    return std::pow(g.zeta * std::pow(m, g.alpha) + g.xi * std::pow(m, g.beta), g.kappa);
}

// sign(sigma), or the boundary-layer ramp when a width is configured.
double smooth(double sigma, const SmcGains& g) {
    if (g.phi > 0.0) return sigma / (std::abs(sigma) + g.phi);
    return sgn(sigma);
}

// Unchecked -r / v_r; the direct-cooperation manifolds keep using it through
// transient non-closing EP geometry rather than failing mid-run.
double tgo_collision_raw(const PairGeometry& pair) { return -pair.r / pair.v_r; }

}  // namespace

void validate_smc_gains(const SmcGains& g, const std::string& label) {
    auto fail = [&](const char* what) { throw ValidationError(label + ": " + what); };
    if (!(g.zeta > 0.0)) fail("zeta must be positive");
    if (!(g.xi > 0.0)) fail("xi must be positive");
    if (!(g.alpha > 0.0)) fail("alpha must be positive");
    if (!(g.beta > 0.0)) fail("beta must be positive");
    if (!(g.kappa > 0.0)) fail("kappa must be positive");
    if (!(g.alpha * g.kappa < 1.0)) fail("alpha*kappa must be below 1");
    if (!(g.beta * g.kappa > 1.0)) fail("beta*kappa must exceed 1");
    if (!(g.epsilon >= 0.0)) fail("epsilon must be non-negative");
    if (!(g.phi >= 0.0)) fail("phi must be non-negative");
}

double fixed_time_bound(const SmcGains& g) {
    return 1.0 / (std::pow(g.zeta, g.kappa) * (1.0 - g.alpha * g.kappa))
           + 1.0 / (std::pow(g.xi, g.kappa) * (g.beta * g.kappa - 1.0));
}

double saturate(double raw, double a_max) {
    if (raw > a_max) return a_max;
    if (raw < -a_max) return -a_max;
    return raw;
}

double sigma1(const PairGeometry& pair_ep) { return pair_ep.lambda_dot; }

double tgo_deviated_pursuit_guarded(const PairGeometry& pair, double v_own, double v_target) {
    // The own lead angle is clamped into (-90, 90) degrees before the secant,
    // so the estimate stays positive and finite even when the geometry swings
    // past beam aspect; the aspect cosine keeps the raw angles.
    const double lim = kLeadAngleGuardDeg * kPi / 180.0;
    const double d1 = std::clamp(pair.delta_first, -lim, lim);
    const double num = v_own + v_target * std::cos(pair.delta_second + pair.delta_first);
    return pair.r / std::cos(d1) * num / (v_own * v_own - v_target * v_target);
}

GuidanceCommand evader_command(const PairGeometry& ep, double a_p_hat, const SmcGains& g,
                               double a_max) {
    const double cd = guarded_cos(ep.delta_first);
    const double s1 = ep.lambda_dot;
    const double raw = -2.0 * ep.v_r * ep.lambda_dot / cd
                       + std::cos(ep.delta_second) / cd * a_p_hat
                       + ep.r / cd * (smc_bracket(s1, g) + g.epsilon / cd) * smooth(s1, g);
    return {raw, saturate(raw, a_max), s1};
}

GuidanceCommand defender_aggressive_indirect(const PairGeometry& dp, double a_p_hat,
                                             double t_f, double t, double v_d, double v_p,
                                             const SmcGains& g, double a_max) {
    if (v_d <= v_p)
        throw SpeedOrderViolation("aggressive defender must be faster than the pursuer");
    const double cd = guarded_cos(dp.delta_first);
    const double s2 = tgo_deviated_pursuit_guarded(dp, v_d, v_p) - (t_f - t);
    double raw = v_d * dp.lambda_dot;
    if (std::abs(dp.v_lambda) > kTransverseGuard) {
        raw += -v_d * std::sin(dp.delta_second + dp.delta_first) * cd / dp.v_lambda * a_p_hat;
        raw += v_d * (v_d * v_d - v_p * v_p) * cd * cd / (dp.r * dp.v_lambda)
               * (smc_bracket(s2, g) + g.epsilon / cd) * smooth(s2, g);
    }
    return {raw, saturate(raw, a_max), s2};
}

GuidanceCommand defender_aggressive_direct(const PairGeometry& ep, const PairGeometry& dp,
                                           double a_e, double a_p_hat, double t_margin,
                                           double v_d, double v_p, const SmcGains& g,
                                           double a_max) {
    if (v_d <= v_p)
        throw SpeedOrderViolation("aggressive defender must be faster than the pursuer");
    const double cd = guarded_cos(dp.delta_first);
    const double sec2 = 1.0 / (cd * cd);
    const double a2 = v_d * v_d - v_p * v_p;
    const double vr2 = ep.v_r * ep.v_r;
    const double s3 = tgo_deviated_pursuit_guarded(dp, v_d, v_p)
                      - (tgo_collision_raw(ep) - t_margin);
    double raw = v_d * dp.lambda_dot;
    if (std::abs(dp.v_lambda) > kTransverseGuard) {
        raw += -(ep.v_lambda * ep.v_lambda) * v_d * a2 / (dp.r * sec2 * vr2 * dp.v_lambda);
        raw += -(ep.r * std::sin(ep.delta_first) * v_d * a2) / (dp.r * sec2 * vr2 * dp.v_lambda)
               * a_e;
        raw += v_d
               * (ep.r * a2 * std::sin(ep.delta_second) * cd
                  - vr2 * dp.r * std::sin(dp.delta_second + dp.delta_first))
               / (dp.r * (1.0 / cd) * dp.v_lambda * vr2) * a_p_hat;
        raw += v_d * a2 / (dp.r * sec2 * dp.v_lambda)
               * (smc_bracket(s3, g) + g.epsilon / cd) * smooth(s3, g);
    }
    return {raw, saturate(raw, a_max), s3};
}

GuidanceCommand defender_defensive_indirect(const PairGeometry& de, double /*a_e_max*/,
                                            double t_f, double t, double v_d, double v_e,
                                            const SmcGains& g, double a_max) {
    if (v_d <= v_e)
        throw SpeedOrderViolation("defensive defender must be faster than the evader");
    const double cd = guarded_cos(de.delta_first);
    const double s4 = tgo_deviated_pursuit_guarded(de, v_d, v_e) - (t_f - t);
    double raw = v_d * de.lambda_dot;
    if (std::abs(de.v_lambda) > kTransverseGuard) {
        raw += v_d * (v_d * v_d - v_e * v_e) * cd * cd / (de.r * de.v_lambda)
               * (smc_bracket(s4, g) + g.epsilon / cd) * smooth(s4, g);
    }
    return {raw, saturate(raw, a_max), s4};
}

GuidanceCommand defender_defensive_direct(const PairGeometry& ep, const PairGeometry& de,
                                          double a_e, double a_p_hat, double t_margin,
                                          double v_d, double v_e, const SmcGains& g,
                                          double a_max) {
    if (v_d <= v_e)
        throw SpeedOrderViolation("defensive defender must be faster than the evader");
    const double cd = guarded_cos(de.delta_first);
    const double a2 = v_d * v_d - v_e * v_e;
    const double s5 = tgo_deviated_pursuit_guarded(de, v_d, v_e) - tgo_collision_raw(ep)
                      + t_margin;
    double raw = 0.0;
    if (std::abs(de.v_lambda) > kTransverseGuard) {
        // Exact feedforward from the manifold rate: the DE-range sine piece
        // originates in the DE time-to-go dynamics and therefore pairs with
        // the evader's acceleration.
        const double gain = v_d * a2 * cd * cd / (de.r * de.v_lambda);
        const double drift = de.v_lambda * de.v_lambda / (a2 * cd * cd)
                             - ep.v_lambda * ep.v_lambda / (ep.v_r * ep.v_r);
        const double ep_piece = ep.r * std::sin(ep.delta_first) / (ep.v_r * ep.v_r);
        const double de_piece =
            de.r * std::sin(de.delta_first + de.delta_second) / (a2 * cd);
        const double pursuer_piece = ep.r * std::sin(ep.delta_second) / (ep.v_r * ep.v_r);
        raw = gain * (drift - (ep_piece + de_piece) * a_e + pursuer_piece * a_p_hat
                      + (smc_bracket(s5, g) + g.epsilon / cd) * smooth(s5, g));
    }
    return {raw, saturate(raw, a_max), s5};
}

GuidanceCommand pursuer_command(const PairGeometry& ep, const PursuerStrategy& st, double t) {
    double raw = 0.0;
    if (st.kind == PursuerKind::ProNav || st.kind == PursuerKind::ProNavPlusScripted)
        raw += -st.nav_gain * ep.v_r * ep.lambda_dot;
    if (st.kind == PursuerKind::Scripted || st.kind == PursuerKind::ProNavPlusScripted)
        raw += st.script.bias + st.script.slope * t
               + st.script.amplitude * std::sin(st.script.frequency * t);
    return {raw, saturate(raw, st.a_max), 0.0};
}

}  // namespace engage
