// Flat `key = value` run configuration
//
// One assignment per line, `#` starts a comment. Energies are in units of J and
// times in units of 1/J; site labels are 1-based.

#pragma once

#include "jch/dynamics.hpp"
#include "jch/experiments.hpp"
#include "jch/model.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jch::io {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                      : "config: " + message),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct RunConfig {
    int n{0};
    double g{0.0};
    double omega_c{0.0};
    double omega_a{0.0};
    std::optional<int> x0;            // default: centre site
    PropagatorMethod method{PropagatorMethod::AnalyticBlocks};
    std::optional<int> resonant_mode; // weak method; default band centre
    double t_start{0.0};
    double t_max{10.0};
    int samples{256};
    std::vector<SitePair> pairs;
    std::vector<double> snapshot_times;
    double scale_max{0.25};
    std::vector<double> sweep_g;
    std::string out;

    // line numbers of the assignments, for error reporting after overrides
    std::map<std::string, int> lines;

    ModelParams model_params() const { return ModelParams{n, 1.0, g, omega_c, omega_a}; }
    int initial_site() const { return x0.value_or((n + 1) / 2); }
    TimeGrid grid() const { return TimeGrid{t_start, t_max, samples}; }

    int line_of(const std::string& key) const {
        const auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }

    // Constraint checks; throws ConfigError naming the offending line.
    void validate() const {
        if (n < 2) throw ConfigError(line_of("n"), "n must be >= 2, got " + std::to_string(n));
        if (!(g >= 0.0)) throw ConfigError(line_of("g"), "g must be >= 0");
        if (x0 && (*x0 < 1 || *x0 > n)) {
            throw ConfigError(line_of("x0"), "x0 must lie in [1, " + std::to_string(n) + "]");
        }
        if (resonant_mode && (*resonant_mode < 1 || *resonant_mode > n)) {
            throw ConfigError(line_of("resonant_mode"), "resonant_mode must lie in [1, " + std::to_string(n) + "]");
        }
        if (!(t_start >= 0.0)) throw ConfigError(line_of("t_start"), "t_start must be >= 0");
        if (!(t_max >= t_start)) throw ConfigError(line_of("t_max"), "t_max must be >= t_start");
        if (samples < 2) throw ConfigError(line_of("samples"), "samples must be >= 2");
        for (const auto& [i, j] : pairs) {
            if (i == j || i < 1 || j < 1 || i > n || j > n) {
                throw ConfigError(line_of("pairs"), "pair " + std::to_string(i) + ":" + std::to_string(j) +
                                                        " must name two distinct sites in [1, " +
                                                        std::to_string(n) + "]");
            }
        }
        for (const double t : snapshot_times) {
            if (!(t >= 0.0)) throw ConfigError(line_of("snapshot_times"), "snapshot times must be >= 0");
        }
        if (!(scale_max > 0.0)) throw ConfigError(line_of("scale_max"), "scale_max must be > 0");
        for (const double v : sweep_g) {
            if (!(v >= 0.0)) throw ConfigError(line_of("sweep_g"), "sweep_g values must be >= 0");
        }
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double to_real(const std::string& text, int line, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(line, "cannot parse '" + text + "' as a number for '" + key + "'");
    }
    return v;
}

inline int to_int(const std::string& text, int line, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || v < -1000000 || v > 1000000) {
        throw ConfigError(line, "cannot parse '" + text + "' as an integer for '" + key + "'");
    }
    return static_cast<int>(v);
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

} // namespace detail

inline PropagatorMethod parse_method(const std::string& text, int line = 0) {
    if (text == "analytic") return PropagatorMethod::AnalyticBlocks;
    if (text == "dense") return PropagatorMethod::DenseOracle;
    if (text == "weak") return PropagatorMethod::WeakEffective;
    if (text == "strong") return PropagatorMethod::StrongEffective;
    throw ConfigError(line, "unknown method '" + text + "' (expected analytic|dense|weak|strong)");
}

// "i:j[,i:j...]"
inline std::vector<SitePair> parse_pairs(const std::string& text, int line = 0) {
    std::vector<SitePair> pairs;
    for (const auto& item : detail::split_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(line, "pair '" + item + "' is not of the form i:j");
        pairs.emplace_back(detail::to_int(detail::trim(item.substr(0, colon)), line, "pairs"),
                           detail::to_int(detail::trim(item.substr(colon + 1)), line, "pairs"));
    }
    return pairs;
}

inline std::vector<double> parse_real_list(const std::string& text, int line, const std::string& key) {
    std::vector<double> values;
    for (const auto& item : detail::split_list(text)) values.push_back(detail::to_real(item, line, key));
    return values;
}

// Parses and validates. `n` is the only required key.
inline RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    bool have_n = false;
    std::istringstream is{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = detail::trim(std::string_view(raw).substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
        const std::string key = detail::trim(std::string_view(content).substr(0, eq));
        const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "missing key");
        if (cfg.lines.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");

        if (key == "n") {
            cfg.n = detail::to_int(value, line, key);
            have_n = true;
        } else if (key == "g") {
            cfg.g = detail::to_real(value, line, key);
        } else if (key == "omega_c") {
            cfg.omega_c = detail::to_real(value, line, key);
        } else if (key == "omega_a") {
            cfg.omega_a = detail::to_real(value, line, key);
        } else if (key == "x0") {
            cfg.x0 = detail::to_int(value, line, key);
        } else if (key == "method") {
            cfg.method = parse_method(value, line);
        } else if (key == "resonant_mode") {
            cfg.resonant_mode = detail::to_int(value, line, key);
        } else if (key == "t_start") {
            cfg.t_start = detail::to_real(value, line, key);
        } else if (key == "t_max") {
            cfg.t_max = detail::to_real(value, line, key);
        } else if (key == "samples") {
            cfg.samples = detail::to_int(value, line, key);
        } else if (key == "pairs") {
            cfg.pairs = parse_pairs(value, line);
        } else if (key == "snapshot_times") {
            cfg.snapshot_times = parse_real_list(value, line, key);
        } else if (key == "scale_max") {
            cfg.scale_max = detail::to_real(value, line, key);
        } else if (key == "sweep_g") {
            cfg.sweep_g = parse_real_list(value, line, key);
        } else if (key == "out") {
            cfg.out = value;
        } else {
            throw ConfigError(line, "unknown key '" + key + "'");
        }
        cfg.lines[key] = line;
    }
    if (!have_n) throw ConfigError(0, "missing required key 'n'");
    cfg.validate();
    return cfg;
}

} // namespace jch::io
