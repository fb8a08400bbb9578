#pragma once

#include <limits>

#include "engage/kinematics.h"

namespace engage {

inline constexpr double kGravity = 9.81;          // m/s^2 per g at the config boundary
inline constexpr double kLeadAngleGuardDeg = 89.9; // clamp for sec/cos terms inside laws
inline constexpr double kTransverseGuard = 1e-6;  // m/s, v_lambda division guard

// Sliding-mode gain set for one manifold. The correction is
// (zeta |s|^alpha + xi |s|^beta)^kappa plus the epsilon robustness margin,
// switched through sign(s) or, with phi > 0, the boundary layer s/(|s|+phi).
struct SmcGains {
    double zeta = 0.0;
    double xi = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double epsilon = 0.5;  // m/s^2 scale robustness margin
    double phi = 0.0;      // boundary-layer width, 0 = exact sign
};

// Throws ValidationError unless zeta, xi, alpha, beta, kappa > 0,
// alpha*kappa < 1, beta*kappa > 1, epsilon >= 0, phi >= 0. label names the
// gain block in the message.
void validate_smc_gains(const SmcGains& gains, const std::string& label);

// Convergence-time bound 1/(zeta^kappa (1 - alpha kappa)) + 1/(xi^kappa (beta kappa - 1)).
double fixed_time_bound(const SmcGains& gains);

enum class Stance { Aggressive, Defensive };
enum class Cooperation { Indirect, Direct };

// Exactly one timing value is populated: impact_time for indirect
// cooperation, time_margin for direct. The unused field stays NaN.
struct GuidanceMode {
    Stance stance = Stance::Aggressive;
    Cooperation cooperation = Cooperation::Indirect;
    double impact_time = std::numeric_limits<double>::quiet_NaN();  // s
    double time_margin = std::numeric_limits<double>::quiet_NaN();  // s
};

enum class PursuerKind { ProNav, Scripted, ProNavPlusScripted };

// bias + slope*t + amplitude*sin(frequency*t)
struct ScriptCoeffs {
    double bias = 0.0;
    double slope = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;  // rad/s
};

struct PursuerStrategy {
    PursuerKind kind = PursuerKind::ProNav;
    double nav_gain = 5.0;
    ScriptCoeffs script;
    double a_max = 40.0 * kGravity;
};

struct GuidanceCommand {
    double raw = 0.0;       // m/s^2, pre-saturation
    double applied = 0.0;   // m/s^2, clamped to the agent's limit
    double manifold = 0.0;  // the sigma value driving it (rad/s for the evader law,
                            // seconds for the defender laws, 0 for the pursuer)
};

double saturate(double raw, double a_max);

// Evader manifold: the pursuer-evader LOS rate.
double sigma1(const PairGeometry& pair_ep);

// Evader law: nulls the EP LOS rate while compensating the estimated pursuer
// maneuver.
GuidanceCommand evader_command(const PairGeometry& pair_ep, double a_p_hat,
                               const SmcGains& gains, double a_max);

// Defender, aggressive stance, indirect cooperation: drives the DP
// deviated-pursuit time-to-go onto the T_f - t schedule (manifold sigma2).
GuidanceCommand defender_aggressive_indirect(const PairGeometry& pair_dp, double a_p_hat,
                                             double t_f, double t, double v_d, double v_p,
                                             const SmcGains& gains, double a_max);

// Defender, aggressive stance, direct cooperation: tracks the EP time-to-go
// minus the margin (manifold sigma3), coupling in the evader and pursuer
// accelerations.
GuidanceCommand defender_aggressive_direct(const PairGeometry& pair_ep,
                                           const PairGeometry& pair_dp, double a_e,
                                           double a_p_hat, double t_margin, double v_d,
                                           double v_p, const SmcGains& gains, double a_max);

// Defender, defensive stance, indirect cooperation: drives the DE time-to-go
// onto the T_f - t schedule (manifold sigma4). a_e_max enters the epsilon
// sufficiency condition, not the command itself; it is kept in the signature
// so the interface carries everything the law's guarantees depend on.
GuidanceCommand defender_defensive_indirect(const PairGeometry& pair_de, double a_e_max,
                                            double t_f, double t, double v_d, double v_e,
                                            const SmcGains& gains, double a_max);

// Defender, defensive stance, direct cooperation: holds the DE time-to-go a
// fixed margin below the EP one (manifold sigma5).
GuidanceCommand defender_defensive_direct(const PairGeometry& pair_ep,
                                          const PairGeometry& pair_de, double a_e,
                                          double a_p_hat, double t_margin, double v_d,
                                          double v_e, const SmcGains& gains, double a_max);

// Homing variant -N * v_r * lambda_dot, a time-scripted profile, or their sum.
GuidanceCommand pursuer_command(const PairGeometry& pair_ep, const PursuerStrategy& strategy,
                                double t);

// Deviated-pursuit time-to-go with the own lead angle clamped at the guard
// instead of raised; what the defender laws and the trace use mid-run.
double tgo_deviated_pursuit_guarded(const PairGeometry& pair, double v_own, double v_target);

}  // namespace engage
