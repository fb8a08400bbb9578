#include "engage/scenario_io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "engage/analysis.h"
#include "engage/errors.h"
#include "json.hpp"

namespace engage {

namespace {

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* strategy_label(PursuerKind kind) {
    switch (kind) {
        case PursuerKind::ProNav: return "pronav";
        case PursuerKind::Scripted: return "scripted";
        case PursuerKind::ProNavPlusScripted: return "pronav_plus_scripted";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Scenario text parsing

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_quote = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_quote = !in_quote;
        else if (s[i] == '#' && !in_quote) return s.substr(0, i);
    }
    return s;
}

bool valid_key_chars(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
    return true;
}

struct Value {
    enum Kind { Number, Text, Flag } kind;
    double num = 0.0;
    std::string text;
    bool flag = false;
};

Value classify_value(const std::string& s, int line) {
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ParseError("unterminated string", line);
        const std::string inner = s.substr(1, s.size() - 2);
        if (inner.find('"') != std::string::npos)
            throw ParseError("unexpected quote inside string", line);
        return {Value::Text, 0.0, inner};
    }
    if (s == "true" || s == "false") return {Value::Flag, 0.0, "", s == "true"};
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("expected a number, string, or true/false, got \"" + s + "\"", line);
    if (!std::isfinite(v)) throw ParseError("number out of range: \"" + s + "\"", line);
    return {Value::Number, v, "", false};
}

double need_number(const Value& v, const std::string& key, int line) {
    if (v.kind != Value::Number) throw ParseError("\"" + key + "\" expects a number", line);
    return v.num;
}

std::string need_text(const Value& v, const std::string& key, int line) {
    if (v.kind != Value::Text)
        throw ParseError("\"" + key + "\" expects a quoted string", line);
    return v.text;
}

bool need_flag(const Value& v, const std::string& key, int line) {
    if (v.kind != Value::Flag) throw ParseError("\"" + key + "\" expects true or false", line);
    return v.flag;
}

// Raw per-agent keys before the position/heading/limit alternatives are
// resolved.
struct AgentKeys {
    std::optional<double> x, y, heading_deg, heading_rad, speed, accel_limit, accel_limit_g;
    std::optional<double> range, los_deg;  // polar position relative to the evader
};

struct Builder {
    ScenarioConfig cfg;
    AgentKeys evader, pursuer, defender;
    bool has_stance = false, has_coop = false;
    std::optional<double> impact_time, time_margin;
    std::map<std::string, int> seen;  // full key -> first line, for duplicates

    void note(const std::string& full, int line) {
        auto [it, fresh] = seen.emplace(full, line);
        if (!fresh)
            throw ParseError("duplicate key \"" + full + "\" (first set on line " +
                                 std::to_string(it->second) + ")",
                             line);
    }

    void conflict(const std::string& full, const std::string& other, int line) const {
        if (seen.count(other))
            throw ParseError("\"" + full + "\" conflicts with \"" + other + "\" on line " +
                                 std::to_string(seen.at(other)),
                             line);
    }

    void set(const std::string& section, const std::string& key, const Value& v, int line);
    void set_agent(const std::string& section, AgentKeys& a, const std::string& key,
                   const Value& v, int line, bool polar_allowed);
    ScenarioConfig finish();
};

void Builder::set_agent(const std::string& section, AgentKeys& a, const std::string& key,
                        const Value& v, int line, bool polar_allowed) {
    const std::string full = section + "." + key;
    auto num = [&] { return need_number(v, full, line); };
    if (key == "x" || key == "y") {
        conflict(full, section + ".range", line);
        conflict(full, section + ".los_deg", line);
        (key == "x" ? a.x : a.y) = num();
    } else if (polar_allowed && (key == "range" || key == "los_deg")) {
        conflict(full, section + ".x", line);
        conflict(full, section + ".y", line);
        (key == "range" ? a.range : a.los_deg) = num();
    } else if (key == "heading_deg") {
        conflict(full, section + ".heading_rad", line);
        a.heading_deg = num();
    } else if (key == "heading_rad") {
        conflict(full, section + ".heading_deg", line);
        a.heading_rad = num();
    } else if (key == "speed") {
        a.speed = num();
    } else if (key == "accel_limit") {
        conflict(full, section + ".accel_limit_g", line);
        a.accel_limit = num();
    } else if (key == "accel_limit_g") {
        conflict(full, section + ".accel_limit", line);
        a.accel_limit_g = num();
    } else {
        throw ParseError("unknown key \"" + key + "\" in [" + section + "]", line);
    }
}

void Builder::set(const std::string& section, const std::string& key, const Value& v,
                  int line) {
    const std::string full = section.empty() ? key : section + "." + key;
    note(full, line);

    if (section.empty()) {
        if (key == "name") cfg.name = need_text(v, full, line);
        else throw ParseError("unknown top-level key \"" + key + "\"", line);
        return;
    }
    if (section == "evader") {
        set_agent(section, evader, key, v, line, false);
        return;
    }
    if (section == "pursuer") {
        if (key == "strategy") {
            const std::string s = need_text(v, full, line);
            if (s == "pronav") cfg.pursuer_strategy.kind = PursuerKind::ProNav;
            else if (s == "scripted") cfg.pursuer_strategy.kind = PursuerKind::Scripted;
            else if (s == "pronav_plus_scripted")
                cfg.pursuer_strategy.kind = PursuerKind::ProNavPlusScripted;
            else
                throw ParseError("strategy must be \"pronav\", \"scripted\", or "
                                 "\"pronav_plus_scripted\"",
                                 line);
        } else if (key == "nav_gain") cfg.pursuer_strategy.nav_gain = need_number(v, full, line);
        else if (key == "script_bias") cfg.pursuer_strategy.script.bias = need_number(v, full, line);
        else if (key == "script_slope") cfg.pursuer_strategy.script.slope = need_number(v, full, line);
        else if (key == "script_amplitude")
            cfg.pursuer_strategy.script.amplitude = need_number(v, full, line);
        else if (key == "script_frequency")
            cfg.pursuer_strategy.script.frequency = need_number(v, full, line);
        else set_agent(section, pursuer, key, v, line, true);
        return;
    }
    if (section == "defender") {
        set_agent(section, defender, key, v, line, true);
        return;
    }
    if (section == "mode") {
        if (key == "stance") {
            const std::string s = need_text(v, full, line);
            if (s == "aggressive") cfg.mode.stance = Stance::Aggressive;
            else if (s == "defensive") cfg.mode.stance = Stance::Defensive;
            else throw ParseError("stance must be \"aggressive\" or \"defensive\"", line);
            has_stance = true;
        } else if (key == "cooperation") {
            const std::string s = need_text(v, full, line);
            if (s == "indirect") cfg.mode.cooperation = Cooperation::Indirect;
            else if (s == "direct") cfg.mode.cooperation = Cooperation::Direct;
            else throw ParseError("cooperation must be \"indirect\" or \"direct\"", line);
            has_coop = true;
        } else if (key == "impact_time") {
            conflict(full, "mode.time_margin", line);
            impact_time = need_number(v, full, line);
        } else if (key == "time_margin") {
            conflict(full, "mode.impact_time", line);
            time_margin = need_number(v, full, line);
        } else {
            throw ParseError("unknown key \"" + key + "\" in [mode]", line);
        }
        return;
    }
    if (section.rfind("gains.sigma", 0) == 0 && section.size() == 12) {
        const char n = section[11];
        if (n >= '1' && n <= '5') {
            SmcGains& g = cfg.gains[n - '1'];
            const double x = need_number(v, full, line);
            if (key == "zeta") g.zeta = x;
            else if (key == "xi") g.xi = x;
            else if (key == "alpha") g.alpha = x;
            else if (key == "beta") g.beta = x;
            else if (key == "kappa") g.kappa = x;
            else if (key == "epsilon") g.epsilon = x;
            else if (key == "phi") g.phi = x;
            else throw ParseError("unknown key \"" + key + "\" in [" + section + "]", line);
            return;
        }
    }
    if (section == "observer") {
        ObserverConfig& o = cfg.observer;
        if (key == "enabled") o.enabled = need_flag(v, full, line);
        else if (key == "z1_linear_gain") {
            const std::string s = need_text(v, full, line);
            if (s == "h2") o.z1_linear_gain = Z1LinearGain::H2;
            else if (s == "h1") o.z1_linear_gain = Z1LinearGain::H1;
            else throw ParseError("z1_linear_gain must be \"h2\" or \"h1\"", line);
        } else {
            const double x = need_number(v, full, line);
            if (key == "g0") o.gains.g0 = x;
            else if (key == "g1") o.gains.g1 = x;
            else if (key == "g2") o.gains.g2 = x;
            else if (key == "h0") o.gains.h0 = x;
            else if (key == "h1") o.gains.h1 = x;
            else if (key == "h2") o.gains.h2 = x;
            else if (key == "lipschitz") o.gains.lipschitz = x;
            else throw ParseError("unknown key \"" + key + "\" in [observer]", line);
        }
        return;
    }
    if (section == "sim") {
        SimSettings& s = cfg.sim;
        if (key == "method") {
            const std::string m = need_text(v, full, line);
            if (m == "rk4") s.method = Method::RK4;
            else if (m == "euler") s.method = Method::Euler;
            else throw ParseError("method must be \"rk4\" or \"euler\"", line);
        } else {
            const double x = need_number(v, full, line);
            if (key == "dt") s.dt = x;
            else if (key == "capture_radius") s.capture_radius = x;
            else if (key == "max_time") s.max_time = x;
            else if (key == "los_rate_tolerance") s.los_rate_tolerance = x;
            else if (key == "manifold_tolerance") s.manifold_tolerance = x;
            else throw ParseError("unknown key \"" + key + "\" in [sim]", line);
        }
        return;
    }
    throw ParseError("unknown section [" + section + "]", line);
}

ScenarioConfig Builder::finish() {
    std::string missing;
    auto miss = [&](const std::string& what) {
        if (!missing.empty()) missing += ", ";
        missing += what;
    };

    if (!has_stance) miss("mode.stance");
    if (!has_coop) miss("mode.cooperation");
    if (!impact_time && !time_margin) miss("mode.impact_time or mode.time_margin");
    auto agent_required = [&](const char* who, const AgentKeys& a) {
        if (!a.speed) miss(std::string(who) + ".speed");
        if (!a.accel_limit && !a.accel_limit_g)
            miss(std::string(who) + ".accel_limit or " + who + ".accel_limit_g");
    };
    agent_required("evader", evader);
    agent_required("pursuer", pursuer);
    agent_required("defender", defender);
    if (!pursuer.x && !pursuer.y && !pursuer.range && !pursuer.los_deg)
        miss("pursuer position (x/y or range + los_deg)");
    if (!missing.empty()) throw ValidationError("missing required keys: " + missing);

    auto polar_pair = [&](const char* who, const AgentKeys& a) {
        if (a.range.has_value() != a.los_deg.has_value())
            throw ValidationError(std::string(who) +
                                  ": range and los_deg must be given together");
    };
    polar_pair("pursuer", pursuer);
    polar_pair("defender", defender);

    auto resolve = [&](const AgentKeys& a, AgentConfig& out, const AgentState& anchor,
                       bool default_to_anchor) {
        if (a.range) {
            const double lam = rad(*a.los_deg);
            out.state.x = anchor.x + *a.range * std::cos(lam);
            out.state.y = anchor.y + *a.range * std::sin(lam);
        } else if (a.x || a.y || !default_to_anchor) {
            out.state.x = a.x.value_or(0.0);
            out.state.y = a.y.value_or(0.0);
        } else {
            out.state.x = anchor.x;
            out.state.y = anchor.y;
        }
        if (a.heading_deg) out.state.gamma = rad(*a.heading_deg);
        else if (a.heading_rad) out.state.gamma = *a.heading_rad;
        else if (default_to_anchor) out.state.gamma = anchor.gamma;
        else out.state.gamma = 0.0;
        out.state.v = *a.speed;
        out.a_max = a.accel_limit ? *a.accel_limit : *a.accel_limit_g * kGravity;
    };

    resolve(evader, cfg.evader, AgentState{}, false);
    // los_deg is the bearing from the evader toward the placed agent. An
    // unplaced defender launches with the evader, heading included.
    resolve(pursuer, cfg.pursuer, cfg.evader.state, false);
    resolve(defender, cfg.defender, cfg.evader.state, true);
    cfg.pursuer_strategy.a_max = cfg.pursuer.a_max;

    if (impact_time) cfg.mode.impact_time = *impact_time;
    if (time_margin) cfg.mode.time_margin = *time_margin;

    validate_config(cfg);
    return cfg;
}

}  // namespace

namespace {

bool known_section(const std::string& s) {
    if (s == "evader" || s == "pursuer" || s == "defender" || s == "mode" ||
        s == "observer" || s == "sim")
        return true;
    return s.rfind("gains.sigma", 0) == 0 && s.size() == 12 && s[11] >= '1' && s[11] <= '5';
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    Builder b;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_key_chars(section))
                throw ParseError("malformed section header", line);
            if (!known_section(section))
                throw ParseError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (!valid_key_chars(key) || key.find('.') != std::string::npos)
            throw ParseError("malformed key", line);
        if (val.empty()) throw ParseError("missing value after \"" + key + " =\"", line);
        b.set(section, key, classify_value(val, line), line);
    }
    return b.finish();
}

std::string render_scenario(const ScenarioConfig& c) {
    std::string out;
    auto kv = [&](const char* key, double v) {
        out += std::string(key) + " = " + fmt_full(v) + "\n";
    };
    auto kvs = [&](const char* key, const std::string& v) {
        out += std::string(key) + " = \"" + v + "\"\n";
    };

    kvs("name", c.name);
    auto agent = [&](const char* header, const AgentConfig& a) {
        out += std::string("\n[") + header + "]\n";
        kv("x", a.state.x);
        kv("y", a.state.y);
        kv("heading_rad", a.state.gamma);
        kv("speed", a.state.v);
        kv("accel_limit", a.a_max);
    };
    agent("evader", c.evader);
    agent("pursuer", c.pursuer);
    kvs("strategy", strategy_label(c.pursuer_strategy.kind));
    kv("nav_gain", c.pursuer_strategy.nav_gain);
    kv("script_bias", c.pursuer_strategy.script.bias);
    kv("script_slope", c.pursuer_strategy.script.slope);
    kv("script_amplitude", c.pursuer_strategy.script.amplitude);
    kv("script_frequency", c.pursuer_strategy.script.frequency);
    agent("defender", c.defender);

    out += "\n[mode]\n";
    kvs("stance", c.mode.stance == Stance::Aggressive ? "aggressive" : "defensive");
    kvs("cooperation", c.mode.cooperation == Cooperation::Indirect ? "indirect" : "direct");
    if (!std::isnan(c.mode.impact_time)) kv("impact_time", c.mode.impact_time);
    if (!std::isnan(c.mode.time_margin)) kv("time_margin", c.mode.time_margin);

    for (int i = 0; i < 5; ++i) {
        out += std::string("\n[gains.") + law_label(static_cast<LawIndex>(i)) + "]\n";
        const SmcGains& g = c.gains[i];
        kv("zeta", g.zeta);
        kv("xi", g.xi);
        kv("alpha", g.alpha);
        kv("beta", g.beta);
        kv("kappa", g.kappa);
        kv("epsilon", g.epsilon);
        kv("phi", g.phi);
    }

    out += "\n[observer]\n";
    out += std::string("enabled = ") + (c.observer.enabled ? "true" : "false") + "\n";
    kv("g0", c.observer.gains.g0);
    kv("g1", c.observer.gains.g1);
    kv("g2", c.observer.gains.g2);
    kv("h0", c.observer.gains.h0);
    kv("h1", c.observer.gains.h1);
    kv("h2", c.observer.gains.h2);
    kv("lipschitz", c.observer.gains.lipschitz);
    kvs("z1_linear_gain", c.observer.z1_linear_gain == Z1LinearGain::H2 ? "h2" : "h1");

    out += "\n[sim]\n";
    kv("dt", c.sim.dt);
    kvs("method", c.sim.method == Method::RK4 ? "rk4" : "euler");
    kv("capture_radius", c.sim.capture_radius);
    kv("max_time", c.sim.max_time);
    kv("los_rate_tolerance", c.sim.los_rate_tolerance);
    kv("manifold_tolerance", c.sim.manifold_tolerance);
    return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

ScenarioConfig base_scenario(const char* name, double lam_ep_deg, double g_e_deg,
                             double g_p_deg, double v_e, double v_p, double v_d) {
    ScenarioConfig c;
    c.name = name;
    c.evader.state = {0.0, 0.0, rad(g_e_deg), v_e};
    const double lam = rad(lam_ep_deg);
    c.pursuer.state = {1e4 * std::cos(lam), 1e4 * std::sin(lam), rad(g_p_deg), v_p};
    c.defender.state = {0.0, 0.0, rad(g_e_deg), v_d};  // launched with the evader
    c.gains[kSigma1].epsilon = 1e-3;
    return c;
}

// Stand-off placement: the evader sits 10 km from the defender on the
// given defender-to-evader bearing.
void place_defender(ScenarioConfig& c, double lam_de_deg, double g_d_deg) {
    const double lam = rad(lam_de_deg);
    c.defender.state.x = -1e4 * std::cos(lam);
    c.defender.state.y = -1e4 * std::sin(lam);
    c.defender.state.gamma = rad(g_d_deg);
}

void set_mode(ScenarioConfig& c, Stance stance, Cooperation coop, double timing) {
    c.mode.stance = stance;
    c.mode.cooperation = coop;
    if (coop == Cooperation::Indirect) c.mode.impact_time = timing;
    else c.mode.time_margin = timing;
}

void set_caps(ScenarioConfig& c, double e_g, double p_g, double d_g) {
    c.evader.a_max = e_g * kGravity;
    c.pursuer.a_max = p_g * kGravity;
    c.defender.a_max = d_g * kGravity;
    c.pursuer_strategy.a_max = c.pursuer.a_max;
}

void add_script(ScenarioConfig& c, double bias, double slope, double amplitude,
                double frequency) {
    c.pursuer_strategy.kind = PursuerKind::ProNavPlusScripted;
    c.pursuer_strategy.script = {bias, slope, amplitude, frequency};
}

std::vector<ScenarioConfig> build_presets() {
    constexpr double pi = std::numbers::pi;
    std::vector<ScenarioConfig> out;

    {
        ScenarioConfig c = base_scenario("fig3", 0, 45, 135, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Indirect, 27.0);
        set_caps(c, 5, 40, 40);
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig4", -30, 0, 120, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Direct, 5.0);
        set_caps(c, 5, 40, 40);
        c.gains[kSigma1].phi = 0.2;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig5", 0, 60, 120, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Direct, 3.0);
        set_caps(c, 5, 40, 40);
        add_script(c, 10.0, 0.0, 100.0, pi);
        c.gains[kSigma1].phi = 0.45;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig6_t20", 30, 45, 135, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Indirect, 20.0);
        set_caps(c, 5, 40, 40);
        c.gains[kSigma1].phi = 0.40;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig6_t40", 30, 45, 135, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Indirect, 40.0);
        set_caps(c, 5, 40, 40);
        c.gains[kSigma1].phi = 0.45;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig6_dc3", 30, 45, 135, 100, 300, 400);
        set_mode(c, Stance::Aggressive, Cooperation::Direct, 3.0);
        set_caps(c, 5, 40, 40);
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig7", 0, 60, 100, 300, 300, 400);
        set_mode(c, Stance::Defensive, Cooperation::Indirect, 40.0);
        set_caps(c, 20, 20, 20);
        place_defender(c, -170, 170);
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig8", 45, 100, 150, 300, 300, 400);
        set_mode(c, Stance::Defensive, Cooperation::Direct, 5.0);
        set_caps(c, 20, 20, 20);
        place_defender(c, -30, -50);
        c.gains[kSigma1].phi = 0.12;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig9_ic", 0, 60, 100, 300, 300, 400);
        set_mode(c, Stance::Defensive, Cooperation::Indirect, 40.0);
        set_caps(c, 20, 20, 20);
        place_defender(c, -170, 170);
        add_script(c, 30.0, 1.5, -10.0, 0.75 * pi);
        c.gains[kSigma1].phi = 0.60;
        out.push_back(c);
    }
    {
        ScenarioConfig c = base_scenario("fig9_dc2", 0, 60, 100, 300, 300, 400);
        set_mode(c, Stance::Defensive, Cooperation::Direct, 2.0);
        set_caps(c, 20, 20, 20);
        place_defender(c, -170, 170);
        add_script(c, 30.0, 1.5, -10.0, 0.75 * pi);
        c.gains[kSigma1].phi = 0.45;
        out.push_back(c);
    }
    return out;
}

const std::vector<ScenarioConfig>& presets() {
    static const std::vector<ScenarioConfig> table = build_presets();
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& c : presets()) names.push_back(c.name);
    return names;
}

ScenarioConfig preset(const std::string& name) {
    for (const auto& c : presets())
        if (c.name == name) return c;
    std::string known;
    for (const auto& c : presets()) {
        if (!known.empty()) known += ", ";
        known += c.name;
    }
    throw ValidationError("unknown preset \"" + name + "\"; available: " + known);
}

// ---------------------------------------------------------------------------
// Trace CSV

const char* const kTraceHeader =
    "t,"
    "evader_x,evader_y,evader_heading,evader_speed,"
    "pursuer_x,pursuer_y,pursuer_heading,pursuer_speed,"
    "defender_x,defender_y,defender_heading,defender_speed,"
    "ep_r,ep_lambda,ep_delta_first,ep_delta_second,ep_v_r,ep_v_lambda,ep_lambda_dot,"
    "dp_r,dp_lambda,dp_delta_first,dp_delta_second,dp_v_r,dp_v_lambda,dp_lambda_dot,"
    "de_r,de_lambda,de_delta_first,de_delta_second,de_v_r,de_v_lambda,de_lambda_dot,"
    "evader_accel_raw,evader_accel,pursuer_accel_raw,pursuer_accel,"
    "defender_accel_raw,defender_accel,"
    "sigma_evader,sigma_defender,tgo_ep,tgo_defender,a_p_hat";

namespace {

constexpr int kTraceColumns = 45;

void record_values(const TraceRecord& rec, double* v) {
    int i = 0;
    v[i++] = rec.t;
    for (const AgentState* a : {&rec.evader, &rec.pursuer, &rec.defender}) {
        v[i++] = a->x;
        v[i++] = a->y;
        v[i++] = a->gamma;
        v[i++] = a->v;
    }
    for (const PairGeometry* p : {&rec.ep, &rec.dp, &rec.de}) {
        v[i++] = p->r;
        v[i++] = p->lambda;
        v[i++] = p->delta_first;
        v[i++] = p->delta_second;
        v[i++] = p->v_r;
        v[i++] = p->v_lambda;
        v[i++] = p->lambda_dot;
    }
    v[i++] = rec.evader_accel_raw;
    v[i++] = rec.evader_accel;
    v[i++] = rec.pursuer_accel_raw;
    v[i++] = rec.pursuer_accel;
    v[i++] = rec.defender_accel_raw;
    v[i++] = rec.defender_accel;
    v[i++] = rec.sigma_evader;
    v[i++] = rec.sigma_defender;
    v[i++] = rec.tgo_ep;
    v[i++] = rec.tgo_defender;
    v[i++] = rec.a_p_hat;
}

void record_from_values(const double* v, TraceRecord& rec) {
    int i = 0;
    rec.t = v[i++];
    for (AgentState* a : {&rec.evader, &rec.pursuer, &rec.defender}) {
        a->x = v[i++];
        a->y = v[i++];
        a->gamma = v[i++];
        a->v = v[i++];
    }
    for (PairGeometry* p : {&rec.ep, &rec.dp, &rec.de}) {
        p->r = v[i++];
        p->lambda = v[i++];
        p->delta_first = v[i++];
        p->delta_second = v[i++];
        p->v_r = v[i++];
        p->v_lambda = v[i++];
        p->lambda_dot = v[i++];
    }
    rec.evader_accel_raw = v[i++];
    rec.evader_accel = v[i++];
    rec.pursuer_accel_raw = v[i++];
    rec.pursuer_accel = v[i++];
    rec.defender_accel_raw = v[i++];
    rec.defender_accel = v[i++];
    rec.sigma_evader = v[i++];
    rec.sigma_defender = v[i++];
    rec.tgo_ep = v[i++];
    rec.tgo_defender = v[i++];
    rec.a_p_hat = v[i++];
}

}  // namespace

void write_trace(const SimResult& result, std::ostream& out) {
    out << kTraceHeader << '\n';
    std::string row;
    char buf[40];
    double v[kTraceColumns];
    for (const auto& rec : result.trace) {
        record_values(rec, v);
        row.clear();
        for (int i = 0; i < kTraceColumns; ++i) {
            if (i) row += ',';
            std::snprintf(buf, sizeof buf, "%.9g", v[i]);
            row += buf;
        }
        row += '\n';
        out << row;
    }
}

std::vector<TraceRecord> read_trace(std::istream& in) {
    std::string line_text;
    if (!std::getline(in, line_text)) throw ParseError("empty trace", 1);
    if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
    if (line_text != kTraceHeader) throw ParseError("unexpected trace header", 1);

    std::vector<TraceRecord> trace;
    double v[kTraceColumns];
    int line = 1;
    while (std::getline(in, line_text)) {
        ++line;
        if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
        if (line_text.empty()) continue;
        const char* c = line_text.c_str();
        for (int i = 0; i < kTraceColumns; ++i) {
            char* end = nullptr;
            v[i] = std::strtod(c, &end);
            if (end == c) throw ParseError("bad number in trace row", line);
            c = end;
            const bool last = i + 1 == kTraceColumns;
            if (!last) {
                if (*c != ',') throw ParseError("expected 45 columns", line);
                ++c;
            } else if (*c != '\0') {
                throw ParseError("expected 45 columns", line);
            }
        }
        TraceRecord rec;
        record_from_values(v, rec);
        trace.push_back(rec);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Summary JSON

std::string write_summary(const SimResult& result, const ScenarioConfig& config) {
    using ojson = nlohmann::ordered_json;
    ojson j;
    j["scenario"] = config.name;
    j["outcome"] = outcome_name(result.outcome);
    j["event_time"] = result.event_time;
    j["evader_miss_distance"] = result.evader_miss_distance;

    auto conv_block = [&](LawIndex law, std::vector<std::pair<double, double>> series) {
        ojson b;
        b["law"] = law_label(law);
        const double bound = fixed_time_bound(config.gains[law]);
        const auto t = convergence_time(series, config.sim.manifold_tolerance);
        b["converged"] = t.has_value();
        b["time"] = t ? ojson(*t) : ojson(nullptr);
        b["fixed_time_bound"] = bound;
        b["within_bound"] = t ? ojson(*t <= bound) : ojson(nullptr);
        return b;
    };
    j["convergence"]["sigma_evader"] = conv_block(kSigma1, evader_sigma_series(result.trace));
    j["convergence"]["sigma_defender"] =
        conv_block(active_defender_law(config.mode), defender_sigma_series(result.trace));

    ojson eps = ojson::object();
    for (const auto& e : epsilon_sufficiency(result.trace, config))
        eps[e.law] = ojson{{"epsilon", e.epsilon},
                           {"required_sup", e.required_sup},
                           {"satisfied", e.satisfied}};
    j["epsilon_sufficiency"] = eps;

    ojson s;
    s["dt"] = config.sim.dt;
    s["method"] = config.sim.method == Method::RK4 ? "rk4" : "euler";
    s["capture_radius"] = config.sim.capture_radius;
    s["max_time"] = config.sim.max_time;
    s["los_rate_tolerance"] = config.sim.los_rate_tolerance;
    s["manifold_tolerance"] = config.sim.manifold_tolerance;
    s["observer_enabled"] = config.observer.enabled;
    s["stance"] = config.mode.stance == Stance::Aggressive ? "aggressive" : "defensive";
    s["cooperation"] =
        config.mode.cooperation == Cooperation::Indirect ? "indirect" : "direct";
    if (!std::isnan(config.mode.impact_time)) s["impact_time"] = config.mode.impact_time;
    if (!std::isnan(config.mode.time_margin)) s["time_margin"] = config.mode.time_margin;
    s["pursuer_strategy"] = strategy_label(config.pursuer_strategy.kind);
    s["speeds"] = ojson{{"evader", config.evader.state.v},
                        {"pursuer", config.pursuer.state.v},
                        {"defender", config.defender.state.v}};
    s["accel_limits"] = ojson{{"evader", config.evader.a_max},
                              {"pursuer", config.pursuer.a_max},
                              {"defender", config.defender.a_max}};
    j["settings"] = s;
    return j.dump(2) + "\n";
}

}  // namespace engage
