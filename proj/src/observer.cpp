#include "engage/observer.h"

#include <cmath>

namespace engage {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate_observer_gains(const ObserverGains& g) {
    if (!(g.g2 > g.g1 && g.g1 > g.g0 && g.g0 > 0.0))
        throw ValidationError("observer gains must satisfy g2 > g1 > g0 > 0");
    if (!(g.h2 > g.h1 && g.h1 > g.h0 && g.h0 > 0.0))
        throw ValidationError("observer gains must satisfy h2 > h1 > h0 > 0");
    if (!(g.lipschitz > 0.0))
        throw ValidationError("observer lipschitz bound must be positive");
}

ObserverState observer_init(const PairGeometry& pair_ep) {
    ObserverState s;
    s.z0 = pair_ep.v_lambda;
    return s;
}

ObserverDerivative observer_derivative(const ObserverState& s, double measured_los_rate,
                                       const PairGeometry& pair_ep, double a_e,
                                       const ObserverGains& g, Z1LinearGain z1_gain) {
    if (!(finite(s.z0) && finite(s.z1) && finite(s.z2) && finite(measured_los_rate) &&
          finite(a_e)))
        throw NonFiniteState("observer state or input is not finite");

    const double L = g.lipschitz;
    const double meas = measured_los_rate * pair_ep.r;  // transverse relative speed

    const double e0 = s.z0 - meas;
    const double v0 =
        -g.g2 * std::cbrt(L) * std::pow(std::abs(e0), 2.0 / 3.0) * sgn(e0) - g.h2 * e0 + s.z1;
    // Model of the transverse-speed rate with the pursuer contribution
    // replaced by the correction v0.
    const double z0_dot = -pair_ep.v_r * pair_ep.lambda_dot
                          - std::cos(pair_ep.delta_first) * a_e + v0;

    const double e1 = s.z1 - v0;
    const double h_mid = (z1_gain == Z1LinearGain::H2) ? g.h2 : g.h1;
    const double v1 =
        -g.g1 * std::sqrt(L) * std::sqrt(std::abs(e1)) * sgn(e1) - h_mid * e1 + s.z2;
    const double z1_dot = v1;

    const double e2 = s.z2 - v1;
    const double z2_dot = -g.g0 * L * sgn(e2) - g.h0 * e2;

    return {z0_dot, z1_dot, z2_dot, v0, v1};
}

double estimate(const ObserverState& s) { return s.z1; }

double estimate_pursuer_accel(const ObserverState& s, const PairGeometry& pair_ep) {
    double c = std::cos(pair_ep.delta_second);
    if (std::abs(c) < kEstimateCosFloor) c = std::copysign(kEstimateCosFloor, c == 0.0 ? 1.0 : c);
    return s.z1 / c;
}

}  // namespace engage
