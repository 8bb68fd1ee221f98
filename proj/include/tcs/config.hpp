#pragma once

// Flat run configuration: one `key = value` per line, sections introduced by
// [section] headers, `#` comments. No nesting. Parse errors carry line
// numbers.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcs/flux_model.hpp"
#include "tcs/tc_ibvp.hpp"

namespace tcs {

struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParsedConfig {
    // section -> key -> (value, line)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> sections;

    bool has(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key,
                    const std::string& fallback = "") const {
        auto s = sections.find(sec);
        if (s == sections.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second.first;
    }
    int line_of(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return 0;
        auto k = s->second.find(key);
        return k == s->second.end() ? 0 : k->second.second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace detail

inline ParsedConfig parse_flat_config(std::istream& in) {
    ParsedConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(lineno, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(lineno, "empty section name");
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "expected `key = value`");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        cfg.sections[section][key] = {value, lineno};
    }
    return cfg;
}

inline ParsedConfig parse_flat_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_flat_config(in);
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct InitialSpec {
    std::string profile = "constant"; // constant | riemann | heaviside_reg | heaviside_reg_neg | csv
    std::vector<double> params;       // constant: v; riemann: ul, ur, x0; heaviside: eps
    std::string csv_path;
};

struct RunConfig {
    std::string problem_name = "run";
    std::string kind = "cauchy"; // cauchy | ibvp

    std::string flux_name = "burgers";
    double flux_param = 0.0;

    double x_lo = 0.0, x_hi = 1.0;
    int n_cells = 100;
    // cauchy only: compact_support | periodic | constant_extension
    std::string closure = "compact_support";
    double sigma = 0.0; // ibvp collar width (0 = auto)

    int m_lambda = 100;
    int steps = 100;
    double t_final = 0.5;
    int backtrace_substeps = 8;
    double backtrace_hmax = 0.0; // 0 = unlimited
    bool alpha_interpolation = true;

    InitialSpec initial;
    Waveform boundary_left = Waveform::constant(0.0);
    Waveform boundary_right = Waveform::constant(0.0);

    std::vector<double> snapshot_times;
    std::string out_dir = "out";
    std::uint64_t seed = 42;

    std::vector<std::string> verify_suites; // kruzhkov | def3 | def1 | kinetic | properties
    int k_points = 21;
};

namespace detail {

inline double to_double(const ParsedConfig& c, const std::string& sec,
                        const std::string& key, const std::string& raw) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError(c.line_of(sec, key), "expected a number for " + key);
    return v;
}

inline std::vector<double> to_double_list(const ParsedConfig& c, const std::string& sec,
                                          const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(to_double(c, sec, key, tok));
    }
    return out;
}

inline Waveform parse_waveform(const ParsedConfig& c, const std::string& sec,
                               const std::string& key, const std::string& raw) {
    // constant:v | step:t0:before:after | ramp:t0:t1:before:after
    std::vector<std::string> parts;
    std::stringstream ss(raw);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
    const int line = c.line_of(sec, key);
    auto num = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw ConfigError(line, "bad numeric field in waveform: " + s);
        return v;
    };
    if (parts.empty()) throw ConfigError(line, "empty boundary waveform");
    if (parts[0] == "constant" && parts.size() == 2)
        return Waveform::constant(num(parts[1]));
    if (parts[0] == "step" && parts.size() == 4)
        return Waveform::step(num(parts[1]), num(parts[2]), num(parts[3]));
    if (parts[0] == "ramp" && parts.size() == 5)
        return Waveform::ramp(num(parts[1]), num(parts[2]), num(parts[3]), num(parts[4]));
    throw ConfigError(line, "boundary waveform must be constant:v, step:t0:v0:v1 or "
                            "ramp:t0:t1:v0:v1");
}

} // namespace detail

inline RunConfig load_run_config(const ParsedConfig& c) {
    RunConfig rc;
    rc.problem_name = c.get("problem", "name", rc.problem_name);
    rc.kind = c.get("problem", "kind", rc.kind);
    if (rc.kind != "cauchy" && rc.kind != "ibvp")
        throw ConfigError(c.line_of("problem", "kind"), "kind must be cauchy or ibvp");
    rc.flux_name = c.get("problem", "flux", rc.flux_name);
    if (c.has("problem", "flux_param"))
        rc.flux_param = detail::to_double(c, "problem", "flux_param",
                                          c.get("problem", "flux_param"));

    auto dom_num = [&](const char* key, double fallback) {
        return c.has("domain", key)
                   ? detail::to_double(c, "domain", key, c.get("domain", key))
                   : fallback;
    };
    rc.x_lo = dom_num("x_lo", rc.x_lo);
    rc.x_hi = dom_num("x_hi", rc.x_hi);
    if (!(rc.x_hi > rc.x_lo))
        throw ConfigError(c.line_of("domain", "x_hi"), "need x_hi > x_lo");
    rc.n_cells = static_cast<int>(dom_num("n", rc.n_cells));
    if (rc.n_cells < 4) throw ConfigError(c.line_of("domain", "n"), "need n >= 4");
    rc.closure = c.get("domain", "closure", rc.closure);
    if (rc.closure != "compact_support" && rc.closure != "periodic" &&
        rc.closure != "constant_extension")
        throw ConfigError(c.line_of("domain", "closure"),
                          "closure must be compact_support, periodic or constant_extension");
    rc.sigma = dom_num("sigma", rc.sigma);

    auto sch_num = [&](const char* key, double fallback) {
        return c.has("scheme", key)
                   ? detail::to_double(c, "scheme", key, c.get("scheme", key))
                   : fallback;
    };
    rc.m_lambda = static_cast<int>(sch_num("m", rc.m_lambda));
    rc.steps = static_cast<int>(sch_num("steps", rc.steps));
    rc.t_final = sch_num("t_final", rc.t_final);
    rc.backtrace_substeps = static_cast<int>(sch_num("substeps", rc.backtrace_substeps));
    rc.backtrace_hmax = sch_num("h_max", rc.backtrace_hmax);
    if (rc.m_lambda < 2 || rc.steps < 1 || !(rc.t_final > 0.0))
        throw ConfigError(0, "scheme: need m >= 2, steps >= 1, t_final > 0");
    const std::string alpha = c.get("scheme", "alpha_interpolation", "on");
    rc.alpha_interpolation = alpha != "off";

    rc.initial.profile = c.get("initial", "profile", rc.initial.profile);
    if (c.has("initial", "params"))
        rc.initial.params =
            detail::to_double_list(c, "initial", "params", c.get("initial", "params"));
    rc.initial.csv_path = c.get("initial", "csv_path", "");

    if (c.has("boundary", "left"))
        rc.boundary_left = detail::parse_waveform(c, "boundary", "left", c.get("boundary", "left"));
    if (c.has("boundary", "right"))
        rc.boundary_right =
            detail::parse_waveform(c, "boundary", "right", c.get("boundary", "right"));

    if (c.has("output", "snapshots"))
        rc.snapshot_times =
            detail::to_double_list(c, "output", "snapshots", c.get("output", "snapshots"));
    rc.out_dir = c.get("output", "dir", rc.out_dir);
    for (double t : rc.snapshot_times)
        if (t < 0.0 || t > rc.t_final + 1e-12)
            throw ConfigError(c.line_of("output", "snapshots"),
                              "snapshot times must lie in [0, t_final]");

    if (c.has("verify", "seed"))
        rc.seed = static_cast<std::uint64_t>(
            detail::to_double(c, "verify", "seed", c.get("verify", "seed")));
    if (c.has("verify", "k_points"))
        rc.k_points = static_cast<int>(
            detail::to_double(c, "verify", "k_points", c.get("verify", "k_points")));
    if (c.has("verify", "suites")) {
        std::stringstream ss(c.get("verify", "suites"));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            if (!tok.empty()) rc.verify_suites.push_back(tok);
        }
    }
    return rc;
}

inline RunConfig load_run_config_file(const std::string& path) {
    return load_run_config(parse_flat_config_file(path));
}

} // namespace tcs
