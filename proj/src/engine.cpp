#include "engage/engine.h"

#include <array>
#include <cmath>
#include <limits>

namespace engage {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Geometries build_geometries(const AgentState& e, const AgentState& p, const AgentState& d) {
    Geometries g;
    try {
        g.ep = pair_geometry(e, p);
    } catch (const CoincidentAgents&) {
    }
    try {
        g.dp = pair_geometry(d, p);
    } catch (const CoincidentAgents&) {
    }
    try {
        g.de = pair_geometry(d, e);
    } catch (const CoincidentAgents&) {
    }
    return g;
}

// Integration state: three planar agents plus the observer cascade.
using StateVec = std::array<double, 12>;

struct StepContext {
    double v_e, v_p, v_d;
    double a_e, a_p, a_d;  // held applied commands
    bool observer;
    const ObserverGains* obs_gains;
    Z1LinearGain z1_gain;
};

StateVec eval_derivative(const StateVec& s, const StepContext& c) {
    StateVec d{};
    auto agent = [](double v, double gamma, double a, double* out) {
        if (v <= 0.0) {
            out[0] = out[1] = out[2] = 0.0;
        } else {
            out[0] = v * std::cos(gamma);
            out[1] = v * std::sin(gamma);
            out[2] = a / v;
        }
    };
    agent(c.v_e, s[2], c.a_e, &d[0]);
    agent(c.v_p, s[5], c.a_p, &d[3]);
    agent(c.v_d, s[8], c.a_d, &d[6]);
    if (c.observer) {
        AgentState es{s[0], s[1], s[2], c.v_e};
        AgentState ps{s[3], s[4], s[5], c.v_p};
        try {
            const PairGeometry ep = pair_geometry(es, ps);
            const ObserverState z{s[9], s[10], s[11], 0.0, 0.0};
            const ObserverDerivative od =
                observer_derivative(z, ep.lambda_dot, ep, c.a_e, *c.obs_gains, c.z1_gain);
            d[9] = od.z0_dot;
            d[10] = od.z1_dot;
            d[11] = od.z2_dot;
        } catch (const CoincidentAgents&) {
            // Pair vanished inside a stage: freeze the cascade for this step.
        }
    }
    return d;
}

void integrate_step(StateVec& s, const StepContext& c, double dt, Method method) {
    if (method == Method::Euler) {
        const StateVec k1 = eval_derivative(s, c);
        for (int i = 0; i < 12; ++i) s[i] += dt * k1[i];
        return;
    }
    const StateVec k1 = eval_derivative(s, c);
    StateVec tmp;
    for (int i = 0; i < 12; ++i) tmp[i] = s[i] + dt / 2.0 * k1[i];
    const StateVec k2 = eval_derivative(tmp, c);
    for (int i = 0; i < 12; ++i) tmp[i] = s[i] + dt / 2.0 * k2[i];
    const StateVec k3 = eval_derivative(tmp, c);
    for (int i = 0; i < 12; ++i) tmp[i] = s[i] + dt * k3[i];
    const StateVec k4 = eval_derivative(tmp, c);
    for (int i = 0; i < 12; ++i)
        s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

std::optional<double> crossing(const std::optional<PairGeometry>& prev,
                               const std::optional<PairGeometry>& curr, double radius) {
    if (!prev || !curr) return std::nullopt;
    if (prev->r > radius && radius >= curr->r)
        return (prev->r - radius) / (prev->r - curr->r);
    return std::nullopt;
}

}  // namespace

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::DefenderInterceptedPursuer: return "defender_intercepted_pursuer";
        case Outcome::DefenderRendezvousedEvader: return "defender_rendezvoused_evader";
        case Outcome::PursuerCapturedEvader: return "pursuer_captured_evader";
        case Outcome::Timeout: return "timeout";
        case Outcome::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

bool mission_success(Outcome o, Stance stance) {
    return stance == Stance::Aggressive ? o == Outcome::DefenderInterceptedPursuer
                                        : o == Outcome::DefenderRendezvousedEvader;
}

std::optional<EventHit> detect_event(const Geometries& prev, const Geometries& curr,
                                     const SimSettings& settings) {
    const double radius = settings.capture_radius;
    if (auto f = crossing(prev.dp, curr.dp, radius)) return EventHit{EventPairId::DP, *f};
    if (auto f = crossing(prev.de, curr.de, radius)) return EventHit{EventPairId::DE, *f};
    if (auto f = crossing(prev.ep, curr.ep, radius)) return EventHit{EventPairId::EP, *f};
    return std::nullopt;
}

SimResult run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, cfg.sim); }

SimResult run_scenario(const ScenarioConfig& cfg, const SimSettings& st) {
    validate_config(cfg);
    validate_settings(st);

    AgentState e = cfg.evader.state;
    AgentState p = cfg.pursuer.state;
    AgentState d = cfg.defender.state;
    const double v_e = e.v, v_p = p.v, v_d = d.v;
    const bool aggressive = cfg.mode.stance == Stance::Aggressive;
    const bool use_obs = cfg.observer.enabled;

    SimResult res;
    res.trace.reserve(static_cast<size_t>(st.max_time / st.dt) + 2);

    Geometries cur = build_geometries(e, p, d);
    ObserverState obs;
    if (use_obs) obs = observer_init(*cur.ep);

    double min_rep = cur.ep ? cur.ep->r : 0.0;
    const double dt = st.dt;
    bool ended = false;

    // t accumulates by += dt rather than n * dt: the laws read t directly, so
    // the accumulation style is part of the reproducible trajectory.
    for (double t = 0.0; t < st.max_time;) {
        const PairGeometry& ep = *cur.ep;

        const GuidanceCommand pcmd = pursuer_command(ep, cfg.pursuer_strategy, t);
        const double ap_hat = use_obs ? estimate_pursuer_accel(obs, ep) : pcmd.applied;
        const GuidanceCommand ecmd =
            evader_command(ep, ap_hat, cfg.gains[kSigma1], cfg.evader.a_max);

        const std::optional<PairGeometry>& own = aggressive ? cur.dp : cur.de;
        if (!own) {
            // The defender's pair collapsed without a detected crossing; there
            // is no meaningful command to compute.
            res.outcome = Outcome::NumericalFailure;
            res.event_time = t;
            res.final_geometries = cur;
            ended = true;
            break;
        }
        GuidanceCommand dcmd;
        switch (cfg.mode.cooperation) {
            case Cooperation::Indirect:
                dcmd = aggressive
                           ? defender_aggressive_indirect(*own, ap_hat, cfg.mode.impact_time,
                                                          t, v_d, v_p, cfg.gains[kSigma2],
                                                          cfg.defender.a_max)
                           : defender_defensive_indirect(*own, cfg.evader.a_max,
                                                         cfg.mode.impact_time, t, v_d, v_e,
                                                         cfg.gains[kSigma4],
                                                         cfg.defender.a_max);
                break;
            case Cooperation::Direct:
                dcmd = aggressive
                           ? defender_aggressive_direct(ep, *own, ecmd.applied, ap_hat,
                                                        cfg.mode.time_margin, v_d, v_p,
                                                        cfg.gains[kSigma3],
                                                        cfg.defender.a_max)
                           : defender_defensive_direct(ep, *own, ecmd.applied, ap_hat,
                                                       cfg.mode.time_margin, v_d, v_e,
                                                       cfg.gains[kSigma5],
                                                       cfg.defender.a_max);
                break;
        }

        TraceRecord rec;
        rec.t = t;
        rec.evader = e;
        rec.pursuer = p;
        rec.defender = d;
        rec.ep = ep;
        rec.dp = cur.dp.value_or(PairGeometry{});
        rec.de = cur.de.value_or(PairGeometry{});
        rec.evader_accel_raw = ecmd.raw;
        rec.evader_accel = ecmd.applied;
        rec.pursuer_accel_raw = pcmd.raw;
        rec.pursuer_accel = pcmd.applied;
        rec.defender_accel_raw = dcmd.raw;
        rec.defender_accel = dcmd.applied;
        rec.sigma_evader = ecmd.manifold;
        rec.sigma_defender = dcmd.manifold;
        rec.tgo_ep = ep.v_r < 0.0 ? -ep.r / ep.v_r : kNaN;
        rec.tgo_defender = aggressive ? tgo_deviated_pursuit_guarded(*own, v_d, v_p)
                                      : tgo_deviated_pursuit_guarded(*own, v_d, v_e);
        rec.a_p_hat = ap_hat;
        res.trace.push_back(rec);
        if (ep.r < min_rep) min_rep = ep.r;

        StateVec s{e.x, e.y, e.gamma, p.x, p.y, p.gamma,
                   d.x, d.y, d.gamma, obs.z0, obs.z1, obs.z2};
        StepContext ctx{v_e,     v_p,   v_d,  ecmd.applied,        pcmd.applied,
                        dcmd.applied, use_obs, &cfg.observer.gains, cfg.observer.z1_linear_gain};
        integrate_step(s, ctx, dt, st.method);
        t += dt;

        e.x = s[0]; e.y = s[1]; e.gamma = wrap_angle(s[2]);
        p.x = s[3]; p.y = s[4]; p.gamma = wrap_angle(s[5]);
        d.x = s[6]; d.y = s[7]; d.gamma = wrap_angle(s[8]);
        if (use_obs) {
            obs.z0 = s[9];
            obs.z1 = s[10];
            obs.z2 = s[11];
        }

        bool finite = true;
        for (double x : s)
            if (!std::isfinite(x)) finite = false;
        if (!finite) {
            res.outcome = Outcome::NumericalFailure;
            res.event_time = t;
            res.final_geometries = cur;
            ended = true;
            break;
        }

        Geometries nxt = build_geometries(e, p, d);
        if (!nxt.ep) {
            // Below the pair resolution floor: the pursuer is on the evader.
            res.outcome = Outcome::PursuerCapturedEvader;
            res.event_time = t;
            res.evader_miss_distance = 0.0;
            res.final_geometries = nxt;
            res.trace.shrink_to_fit();
            return res;
        }
        if (nxt.ep->r < min_rep) min_rep = nxt.ep->r;

        if (auto hit = detect_event(cur, nxt, st)) {
            const double frac = hit->frac;
            res.event_time = t - dt + frac * dt;
            res.evader_miss_distance = cur.ep->r + frac * (nxt.ep->r - cur.ep->r);
            switch (hit->pair) {
                case EventPairId::DP: res.outcome = Outcome::DefenderInterceptedPursuer; break;
                case EventPairId::DE: res.outcome = Outcome::DefenderRendezvousedEvader; break;
                case EventPairId::EP: res.outcome = Outcome::PursuerCapturedEvader; break;
            }
            res.final_geometries = nxt;
            res.trace.shrink_to_fit();
            return res;
        }
        cur = nxt;
    }

    if (!ended) {
        res.outcome = Outcome::Timeout;
        res.event_time = st.max_time;
        res.final_geometries = cur;
    }
    res.evader_miss_distance = min_rep;
    res.trace.shrink_to_fit();
    return res;
}

}  // namespace engage
