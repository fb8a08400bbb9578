#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engage/engine.h"

namespace engage {

enum class MissKind {
    Event,    // EP separation interpolated at the terminating event
    Minimum,  // smallest recorded EP separation over the whole trace
};

double miss_distance(const SimResult& result, MissKind kind);

// (t, sigma) columns pulled out of a trace.
std::vector<std::pair<double, double>> evader_sigma_series(const std::vector<TraceRecord>& trace);
std::vector<std::pair<double, double>> defender_sigma_series(const std::vector<TraceRecord>& trace);

// First time after which |sigma| stays within tolerance through the end of
// the series; nullopt when it never settles (including an empty series).
std::optional<double> convergence_time(const std::vector<std::pair<double, double>>& series,
                                       double tolerance);

struct MarginReport {
    bool applicable = false;    // a usable post-settle window existed
    double settle_time = 0.0;   // s, last time the defender manifold sat outside tolerance
    double max_deviation = 0.0; // s, worst |(tgo_ep - tgo_defender) - t_margin| in the window
    bool pass = false;          // max_deviation within the requested tolerance
};

// Checks the realized time-to-go gap against the commanded margin once the
// defender manifold has settled. The settle scan ignores the last two
// seconds so the terminal geometry cannot mask a late excursion; the
// measurement window opens one second after settle. Samples with a
// non-finite gap (EP pair not closing) are skipped.
MarginReport margin_report(const std::vector<TraceRecord>& trace, double t_margin,
                           double tolerance, double sigma_tolerance = 0.01);

struct EpsilonEntry {
    std::string law;      // "sigma1" .. "sigma5"
    double epsilon;       // configured robustness margin
    double required_sup;  // realized supremum of the matched disturbance term
    bool satisfied;       // epsilon exceeds the supremum
};

// Realized sufficiency report for the evader law and the stance's defender
// law, evaluated along the trace. The sigma1/2/3/5 terms scale the pursuer
// estimation error, so they collapse to zero on perfect-information runs;
// sigma4's term scales the evader's acceleration limit instead.
std::vector<EpsilonEntry> epsilon_sufficiency(const std::vector<TraceRecord>& trace,
                                              const ScenarioConfig& config);

enum class PlotKind { Trajectories, Manifolds, Accelerations, TimeToGo };

// Deterministic standalone 800x600 SVG. Every trace sample is drawn; series
// with non-finite gaps (time-to-go while not closing) break into segments.
// Throws ValidationError on an empty trace.
std::string emit_plot(const std::vector<TraceRecord>& trace, PlotKind kind);

}  // namespace engage
