#pragma once

// Shared helpers for the test binaries: an exact constant-turn propagator used
// as the independent motion oracle, and a plant-plus-observer harness that
// drives the estimator against a known pursuer acceleration profile.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "engage/kinematics.h"
#include "engage/observer.h"

namespace support {

// Propagates a constant-speed agent under a constant lateral acceleration for
// time h, exactly: a circular arc of radius v^2/|a|, or a straight segment
// when a is zero. Independent of the simulator's integrator, so it can serve
// as the truth model in finite-difference checks.
inline engage::AgentState arc(const engage::AgentState& s, double a, double h) {
    engage::AgentState n = s;
    if (s.v <= 0.0) return n;
    if (a == 0.0) {
        n.x += s.v * h * std::cos(s.gamma);
        n.y += s.v * h * std::sin(s.gamma);
        return n;
    }
    const double w = a / s.v;
    const double g2 = s.gamma + w * h;
    const double radius = s.v / w;
    n.x += radius * (std::sin(g2) - std::sin(s.gamma));
    n.y += radius * (std::cos(s.gamma) - std::cos(g2));
    n.gamma = engage::wrap_angle(g2);
    return n;
}

struct TrackingProbe {
    double t;
    double a_true;  // pursuer lateral acceleration actually applied
    double a_hat;   // observer estimate at the same instant
};

// Runs the estimator against a two-agent engagement where the pursuer applies
// the given acceleration profile and the evader flies straight. Plant and
// observer integrate together under RK4 at the simulator's default step, from
// the simulator's canonical opening geometry.
inline std::vector<TrackingProbe> track_profile(
    const std::function<double(double, const engage::PairGeometry&)>& pursuer_accel,
    double t_end, double dt = 1e-3) {
    using engage::AgentState;
    using engage::ObserverDerivative;
    using engage::ObserverState;
    using engage::PairGeometry;

    AgentState e{0.0, 0.0, std::atan(1.0), 100.0};            // 45 deg
    AgentState p{10000.0, 0.0, 3.0 * std::atan(1.0), 300.0};  // 135 deg
    engage::ObserverGains gains;
    ObserverState obs = engage::observer_init(engage::pair_geometry(e, p));

    std::vector<TrackingProbe> out;
    out.reserve(static_cast<size_t>(t_end / dt) + 1);
    using Vec = std::array<double, 9>;
    for (double t = 0.0; t < t_end;) {
        PairGeometry ep = engage::pair_geometry(e, p);
        const double ap = pursuer_accel(t, ep);
        out.push_back({t, ap, engage::estimate_pursuer_accel(obs, ep)});

        Vec s{e.x, e.y, e.gamma, p.x, p.y, p.gamma, obs.z0, obs.z1, obs.z2};
        auto deriv = [&](const Vec& y) {
            AgentState ee{y[0], y[1], y[2], e.v};
            AgentState pp{y[3], y[4], y[5], p.v};
            PairGeometry g = engage::pair_geometry(ee, pp);
            ObserverState os{y[6], y[7], y[8], 0.0, 0.0};
            ObserverDerivative od = engage::observer_derivative(os, g.lambda_dot, g, 0.0, gains);
            return Vec{e.v * std::cos(y[2]), e.v * std::sin(y[2]), 0.0,
                       p.v * std::cos(y[5]), p.v * std::sin(y[5]), ap / p.v,
                       od.z0_dot, od.z1_dot, od.z2_dot};
        };
        const Vec k1 = deriv(s);
        Vec s2, s3, s4;
        for (int i = 0; i < 9; ++i) s2[i] = s[i] + dt / 2.0 * k1[i];
        const Vec k2 = deriv(s2);
        for (int i = 0; i < 9; ++i) s3[i] = s[i] + dt / 2.0 * k2[i];
        const Vec k3 = deriv(s3);
        for (int i = 0; i < 9; ++i) s4[i] = s[i] + dt * k3[i];
        const Vec k4 = deriv(s4);
        for (int i = 0; i < 9; ++i)
            s[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += dt;
        e.x = s[0]; e.y = s[1]; e.gamma = engage::wrap_angle(s[2]);
        p.x = s[3]; p.y = s[4]; p.gamma = engage::wrap_angle(s[5]);
        obs.z0 = s[6]; obs.z1 = s[7]; obs.z2 = s[8];
    }
    return out;
}

// Last instant the tracking error sits outside the band, scanning from a
// start time; the profile counts as settled from that point on.
inline double settle_time(const std::vector<TrackingProbe>& probes, double band,
                          double from = 0.0) {
    double s = from;
    for (const auto& pr : probes)
        if (pr.t >= from && std::fabs(pr.a_hat - pr.a_true) > band) s = pr.t;
    return s;
}

inline double sup_error_after(const std::vector<TrackingProbe>& probes, double from) {
    double m = 0.0;
    for (const auto& pr : probes)
        if (pr.t >= from) m = std::max(m, std::fabs(pr.a_hat - pr.a_true));
    return m;
}

}  // namespace support
