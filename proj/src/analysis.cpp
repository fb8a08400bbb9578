#include "engage/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "engage/errors.h"

namespace engage {

namespace {

constexpr const char* kEvaderColor = "#2ca02c";
constexpr const char* kPursuerColor = "#d62728";
constexpr const char* kDefenderColor = "#1f77b4";

// Canvas geometry shared by every plot kind.
constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kBoxX0 = 70.0, kBoxY0 = 46.0, kBoxX1 = 776.0, kBoxY1 = 550.0;

struct Series {
    std::string label;
    const char* color;
    std::vector<std::pair<double, double>> pts;
};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt4g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Bounds {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void take(double v) {
        if (!std::isfinite(v)) return;
        min = std::min(min, v);
        max = std::max(max, v);
    }
    void pad() {
        if (min > max) {  // nothing finite at all
            min = 0.0;
            max = 1.0;
            return;
        }
        const double span = max - min;
        const double p = span > 0.0 ? 0.05 * span : 1.0;
        min -= p;
        max += p;
    }
};

class SvgPlot {
public:
    SvgPlot(const char* title, const char* x_label, const char* y_label,
            std::vector<Series> series)
        : series_(std::move(series)) {
        for (const auto& s : series_)
            for (const auto& [x, y] : s.pts) {
                xb_.take(x);
                yb_.take(y);
            }
        xb_.pad();
        yb_.pad();

        out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
                "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n";
        out_ += "<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
        text(kBoxX0, 26.0, title, "start", 15);
        grid();
        caption(x_label, y_label);
        legend();
    }

    void polyline(const Series& s) {
        // Non-finite samples split the series into separately drawn segments.
        std::string pts;
        auto flush = [&] {
            if (pts.empty()) return;
            out_ += "<polyline fill=\"none\" stroke=\"";
            out_ += s.color;
            out_ += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
            pts.clear();
        };
        for (const auto& [x, y] : s.pts) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                flush();
                continue;
            }
            pts += fmt2(px(x)) + "," + fmt2(py(y)) + " ";
        }
        flush();
    }

    void draw_series() {
        for (const auto& s : series_) polyline(s);
    }

    void launch_marker(double x, double y, const char* color) {
        out_ += "<circle cx=\"" + fmt2(px(x)) + "\" cy=\"" + fmt2(py(y)) +
                "\" r=\"4\" fill=\"" + std::string(color) + "\"/>\n";
    }

    void event_marker(double x, double y, const char* color) {
        const std::string cx = fmt2(px(x)), cy = fmt2(py(y));
        out_ += "<path d=\"M-5,-5 L5,5 M-5,5 L5,-5\" transform=\"translate(" + cx + " " + cy +
                ")\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    }

    void zero_line() {
        if (yb_.min >= 0.0 || yb_.max <= 0.0) return;
        const std::string y = fmt2(py(0.0));
        out_ += "<line x1=\"" + fmt2(kBoxX0) + "\" y1=\"" + y + "\" x2=\"" + fmt2(kBoxX1) +
                "\" y2=\"" + y + "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    }

    std::string finish() {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    double px(double x) const {
        return kBoxX0 + (x - xb_.min) / (xb_.max - xb_.min) * (kBoxX1 - kBoxX0);
    }
    double py(double y) const {
        return kBoxY1 - (y - yb_.min) / (yb_.max - yb_.min) * (kBoxY1 - kBoxY0);
    }

    void text(double x, double y, const std::string& t, const char* anchor, int size) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"%d\" ", x, y,
                      size);
        out_ += buf;
        out_ += "fill=\"#333333\" text-anchor=\"";
        out_ += anchor;
        out_ += "\">" + t + "</text>\n";
    }

    void grid() {
        out_ += "<rect x=\"" + fmt2(kBoxX0) + "\" y=\"" + fmt2(kBoxY0) + "\" width=\"" +
                fmt2(kBoxX1 - kBoxX0) + "\" height=\"" + fmt2(kBoxY1 - kBoxY0) +
                "\" fill=\"none\" stroke=\"#333333\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = xb_.min + i * (xb_.max - xb_.min) / 4.0;
            const double fy = yb_.min + i * (yb_.max - yb_.min) / 4.0;
            const std::string gx = fmt2(px(fx)), gy = fmt2(py(fy));
            if (i > 0 && i < 4) {
                out_ += "<line x1=\"" + gx + "\" y1=\"" + fmt2(kBoxY0) + "\" x2=\"" + gx +
                        "\" y2=\"" + fmt2(kBoxY1) + "\" stroke=\"#dddddd\"/>\n";
                out_ += "<line x1=\"" + fmt2(kBoxX0) + "\" y1=\"" + gy + "\" x2=\"" +
                        fmt2(kBoxX1) + "\" y2=\"" + gy + "\" stroke=\"#dddddd\"/>\n";
            }
            text(px(fx), kBoxY1 + 18.0, fmt4g(fx), "middle", 12);
            text(kBoxX0 - 8.0, py(fy) + 4.0, fmt4g(fy), "end", 12);
        }
    }

    void caption(const char* x_label, const char* y_label) {
        text((kBoxX0 + kBoxX1) / 2.0, 586.0, x_label, "middle", 13);
        const std::string cy = fmt2((kBoxY0 + kBoxY1) / 2.0);
        out_ += "<text x=\"18\" y=\"" + cy + "\" font-size=\"13\" fill=\"#333333\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 18 " + cy + ")\">";
        out_ += y_label;
        out_ += "</text>\n";
    }

    void legend() {
        double x = kBoxX1 - 130.0 * static_cast<double>(series_.size());
        for (const auto& s : series_) {
            out_ += "<line x1=\"" + fmt2(x) + "\" y1=\"22\" x2=\"" + fmt2(x + 22.0) +
                    "\" y2=\"22\" stroke=\"" + std::string(s.color) +
                    "\" stroke-width=\"2\"/>\n";
            text(x + 28.0, 26.0, s.label, "start", 12);
            x += 130.0;
        }
    }

    std::vector<Series> series_;
    Bounds xb_, yb_;
    std::string out_;
};

}  // namespace

double miss_distance(const SimResult& result, MissKind kind) {
    if (kind == MissKind::Event || result.trace.empty()) return result.evader_miss_distance;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : result.trace) best = std::min(best, rec.ep.r);
    return best;
}

std::vector<std::pair<double, double>> evader_sigma_series(
    const std::vector<TraceRecord>& trace) {
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.size());
    for (const auto& rec : trace) out.emplace_back(rec.t, rec.sigma_evader);
    return out;
}

std::vector<std::pair<double, double>> defender_sigma_series(
    const std::vector<TraceRecord>& trace) {
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.size());
    for (const auto& rec : trace) out.emplace_back(rec.t, rec.sigma_defender);
    return out;
}

std::optional<double> convergence_time(const std::vector<std::pair<double, double>>& series,
                                       double tolerance) {
    if (series.empty()) return std::nullopt;
    std::ptrdiff_t last_out = -1;
    for (std::ptrdiff_t i = 0; i < std::ssize(series); ++i)
        if (!(std::abs(series[i].second) <= tolerance)) last_out = i;
    if (last_out + 1 == std::ssize(series)) return std::nullopt;
    return series[last_out + 1].first;
}

MarginReport margin_report(const std::vector<TraceRecord>& trace, double t_margin,
                           double tolerance, double sigma_tolerance) {
    MarginReport rep;
    if (trace.empty()) return rep;
    const double t_end = trace.back().t;
    for (const auto& rec : trace)
        if (std::abs(rec.sigma_defender) > sigma_tolerance && rec.t < t_end - 2.0)
            rep.settle_time = rec.t;
    for (const auto& rec : trace) {
        if (rec.t < rep.settle_time + 1.0) continue;
        const double gap = rec.tgo_ep - rec.tgo_defender;
        if (!std::isfinite(gap)) continue;
        rep.max_deviation = std::max(rep.max_deviation, std::abs(gap - t_margin));
        rep.applicable = true;
    }
    rep.pass = rep.applicable && rep.max_deviation <= tolerance;
    return rep;
}

std::vector<EpsilonEntry> epsilon_sufficiency(const std::vector<TraceRecord>& trace,
                                              const ScenarioConfig& config) {
    const double v_e = config.evader.state.v;
    const double v_p = config.pursuer.state.v;
    const double v_d = config.defender.state.v;
    const LawIndex dlaw = active_defender_law(config.mode);

    double sup1 = 0.0, supd = 0.0;
    for (const auto& rec : trace) {
        const double err = std::abs(rec.pursuer_accel - rec.a_p_hat);
        sup1 = std::max(sup1, err);

        double term = std::numeric_limits<double>::quiet_NaN();
        const double vr2 = rec.ep.v_r * rec.ep.v_r;
        switch (dlaw) {
            case kSigma2:
                if (rec.dp.r > 0.0) term = rec.dp.r / (v_d * v_d - v_p * v_p) * err;
                break;
            case kSigma3:
                if (rec.dp.r > 0.0 && vr2 > 0.0) {
                    const double a = v_d * v_d - v_p * v_p;
                    term = (rec.ep.r * a + rec.dp.r * vr2) / (a * vr2) * err;
                }
                break;
            case kSigma4:
                if (rec.de.r > 0.0)
                    term = rec.de.r / (v_d * v_d - v_e * v_e) * config.evader.a_max;
                break;
            case kSigma5:
                if (rec.de.r > 0.0 && vr2 > 0.0) {
                    const double a = v_d * v_d - v_e * v_e;
                    term = (rec.ep.r * a + rec.de.r * vr2) / (a * vr2) * err;
                }
                break;
            default:
                break;
        }
        if (std::isfinite(term)) supd = std::max(supd, std::abs(term));
    }

    const SmcGains& g1 = config.gains[kSigma1];
    const SmcGains& gd = config.gains[dlaw];
    return {
        {law_label(kSigma1), g1.epsilon, sup1, g1.epsilon > sup1},
        {law_label(dlaw), gd.epsilon, supd, gd.epsilon > supd},
    };
}

std::string emit_plot(const std::vector<TraceRecord>& trace, PlotKind kind) {
    if (trace.empty()) throw ValidationError("cannot plot an empty trace");

    auto column = [&](double TraceRecord::*m) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(trace.size());
        for (const auto& rec : trace) pts.emplace_back(rec.t, rec.*m);
        return pts;
    };

    switch (kind) {
        case PlotKind::Trajectories: {
            auto path = [&](AgentState TraceRecord::*m) {
                std::vector<std::pair<double, double>> pts;
                pts.reserve(trace.size());
                for (const auto& rec : trace) pts.emplace_back((rec.*m).x, (rec.*m).y);
                return pts;
            };
            std::vector<Series> series = {
                {"evader", kEvaderColor, path(&TraceRecord::evader)},
                {"pursuer", kPursuerColor, path(&TraceRecord::pursuer)},
                {"defender", kDefenderColor, path(&TraceRecord::defender)},
            };
            SvgPlot plot("trajectories", "x [m]", "y [m]", series);
            plot.draw_series();
            for (const auto& s : series) {
                plot.launch_marker(s.pts.front().first, s.pts.front().second, s.color);
                plot.event_marker(s.pts.back().first, s.pts.back().second, s.color);
            }
            return plot.finish();
        }
        case PlotKind::Manifolds: {
            std::vector<Series> series = {
                {"sigma evader", kEvaderColor, column(&TraceRecord::sigma_evader)},
                {"sigma defender", kDefenderColor, column(&TraceRecord::sigma_defender)},
            };
            SvgPlot plot("sliding manifolds", "t [s]", "sigma", series);
            plot.zero_line();
            plot.draw_series();
            return plot.finish();
        }
        case PlotKind::Accelerations: {
            std::vector<Series> series = {
                {"evader", kEvaderColor, column(&TraceRecord::evader_accel)},
                {"pursuer", kPursuerColor, column(&TraceRecord::pursuer_accel)},
                {"defender", kDefenderColor, column(&TraceRecord::defender_accel)},
            };
            SvgPlot plot("applied accelerations", "t [s]", "acceleration [m/s^2]", series);
            plot.zero_line();
            plot.draw_series();
            return plot.finish();
        }
        case PlotKind::TimeToGo: {
            std::vector<Series> series = {
                {"evader-pursuer", kPursuerColor, column(&TraceRecord::tgo_ep)},
                {"defender", kDefenderColor, column(&TraceRecord::tgo_defender)},
            };
            SvgPlot plot("time-to-go", "t [s]", "time-to-go [s]", series);
            plot.draw_series();
            return plot.finish();
        }
    }
    throw ValidationError("unknown plot kind");
}

}  // namespace engage
