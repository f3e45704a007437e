#pragma once

// Config file handling. The on-disk format is JSON whose top-level keys
// mirror the scenario parameter table 1:1 (P_h, P_g, P_n, alpha_h, alpha_g,
// lambda_h, lambda_g, a, h, delta_h, r_b, y0, x0, epsilon, m, sigma_sq,
// kappa) plus the antenna/quadrature/search/montecarlo groups. Unknown keys
// are rejected by name. An empty file yields the defaults. Command-line
// overrides take `key=value` with dotted paths for groups and optional unit
// suffixes on numbers (km, m, W, deg).

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hapss/config.hpp"
#include "hapss/errors.hpp"

namespace hapss::io {

namespace detail {

using nlohmann::json;

inline double num(const json& j, const std::string& key) {
    if (!j.is_number()) throw config_error(key + ": expected a number");
    return j.get<double>();
}

inline int integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw config_error(key + ": expected an integer");
    return j.get<int>();
}

inline void parse_antenna(const json& j, AntennaConfig& a) {
    for (const auto& [k, v] : j.items()) {
        if (k == "directional") {
            if (!v.is_boolean()) throw config_error("antenna.directional: expected a bool");
            a.directional = v.get<bool>();
        } else if (k == "theta_3db") {
            a.theta_3db_deg = num(v, "antenna.theta_3db");
        } else if (k == "mainlobe_exponent") {
            a.mainlobe_exponent = integer(v, "antenna.mainlobe_exponent");
        } else {
            throw config_error("unknown key antenna." + k);
        }
    }
}

inline void parse_quadrature(const json& j, QuadratureConfig& q) {
    for (const auto& [k, v] : j.items()) {
        if (k == "abs_tol") q.abs_tol = num(v, "quadrature.abs_tol");
        else if (k == "rel_tol") q.rel_tol = num(v, "quadrature.rel_tol");
        else if (k == "max_segments") q.max_segments = integer(v, "quadrature.max_segments");
        else throw config_error("unknown key quadrature." + k);
    }
}

inline void parse_search(const json& j, DensitySearchConfig& s) {
    for (const auto& [k, v] : j.items()) {
        if (k == "grid_points") s.grid_points = integer(v, "search.grid_points");
        else if (k == "lambda_min") s.lambda_min = num(v, "search.lambda_min");
        else if (k == "lambda_max") s.lambda_max = num(v, "search.lambda_max");
        else throw config_error("unknown key search." + k);
    }
}

inline void parse_montecarlo(const json& j, MonteCarloConfig& m) {
    for (const auto& [k, v] : j.items()) {
        if (k == "trials") {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw config_error("montecarlo.trials: expected a non-negative integer");
            m.trials = v.get<std::uint64_t>();
        } else if (k == "n_intervals") {
            m.n_intervals = integer(v, "montecarlo.n_intervals");
        } else {
            throw config_error("unknown key montecarlo." + k);
        }
    }
}

}  // namespace detail

/// Parse a JSON config document into a NetworkConfig (defaults for missing
/// keys). Does not run validate(); callers do after overrides.
inline NetworkConfig parse_config_json(const std::string& text) {
    NetworkConfig cfg;
    std::string stripped = text;
    // empty / whitespace-only file keeps the defaults
    stripped.erase(0, stripped.find_first_not_of(" \t\r\n"));
    if (stripped.empty()) return cfg;

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config root must be a JSON object");

    using detail::integer;
    using detail::num;
    for (const auto& [k, v] : doc.items()) {
        if (k == "schema_version") {
            if (integer(v, k) != 1) throw config_error("schema_version: only version 1 is supported");
        } else if (k == "P_h") cfg.hap_tx_power = num(v, k);
        else if (k == "P_g") cfg.bs_tx_power = num(v, k);
        else if (k == "P_n") cfg.noise_power = num(v, k);
        else if (k == "alpha_h") cfg.hap_pathloss = num(v, k);
        else if (k == "alpha_g") cfg.bs_pathloss = num(v, k);
        else if (k == "lambda_h") cfg.hap_density = num(v, k);
        else if (k == "lambda_g") cfg.bs_density = num(v, k);
        else if (k == "a") cfg.earth_radius = num(v, k);
        else if (k == "h") cfg.hap_height = num(v, k);
        else if (k == "delta_h") cfg.height_fluctuation = num(v, k);
        else if (k == "r_b") cfg.bs_field_radius = num(v, k);
        else if (k == "y0") cfg.bs_link_distance = num(v, k);
        else if (k == "x0") {
            if (v.is_null()) cfg.hap_link_distance.reset();
            else cfg.hap_link_distance = num(v, k);
        }
        else if (k == "epsilon") cfg.sinr_threshold = num(v, k);
        else if (k == "m") cfg.nakagami_m = integer(v, k);
        else if (k == "sigma_sq") cfg.rayleigh_scale = num(v, k);
        else if (k == "kappa") cfg.min_terrestrial_coverage = num(v, k);
        else if (k == "antenna") detail::parse_antenna(v, cfg.antenna);
        else if (k == "quadrature") detail::parse_quadrature(v, cfg.quadrature);
        else if (k == "search") detail::parse_search(v, cfg.search);
        else if (k == "montecarlo") detail::parse_montecarlo(v, cfg.montecarlo);
        else throw config_error("unknown key " + k);
    }
    return cfg;
}

/// Numeric literal with an optional unit suffix. Lengths accept km/m;
/// powers W; angles deg. The multiplier converts to SI base units.
inline double parse_value_with_unit(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw config_error(key + ": cannot parse value '" + text + "'");
    }
    std::string suffix = text.substr(pos);
    while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front())))
        suffix.erase(suffix.begin());
    if (suffix.empty()) return v;
    if (suffix == "km") return v * 1e3;
    if (suffix == "m") return v;
    if (suffix == "W") return v;
    if (suffix == "deg") return v;
    throw config_error(key + ": unknown unit suffix '" + suffix + "'");
}

/// Apply `key=value` overrides (dotted group paths). Integer-valued keys
/// reject fractional input, mirroring the JSON parser.
inline void apply_override(NetworkConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override '" + assignment + "' is not key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string val = assignment.substr(eq + 1);

    auto as_int = [&](const char* k) {
        const double v = parse_value_with_unit(val, k);
        if (v != std::floor(v)) throw config_error(std::string(k) + ": expected an integer");
        return static_cast<int>(v);
    };
    auto as_bool = [&](const char* k) {
        if (val == "true" || val == "1") return true;
        if (val == "false" || val == "0") return false;
        throw config_error(std::string(k) + ": expected true/false");
    };

    if (key == "P_h") cfg.hap_tx_power = parse_value_with_unit(val, "P_h");
    else if (key == "P_g") cfg.bs_tx_power = parse_value_with_unit(val, "P_g");
    else if (key == "P_n") cfg.noise_power = parse_value_with_unit(val, "P_n");
    else if (key == "alpha_h") cfg.hap_pathloss = parse_value_with_unit(val, "alpha_h");
    else if (key == "alpha_g") cfg.bs_pathloss = parse_value_with_unit(val, "alpha_g");
    else if (key == "lambda_h") cfg.hap_density = parse_value_with_unit(val, "lambda_h");
    else if (key == "lambda_g") cfg.bs_density = parse_value_with_unit(val, "lambda_g");
    else if (key == "a") cfg.earth_radius = parse_value_with_unit(val, "a");
    else if (key == "h") cfg.hap_height = parse_value_with_unit(val, "h");
    else if (key == "delta_h") cfg.height_fluctuation = parse_value_with_unit(val, "delta_h");
    else if (key == "r_b") cfg.bs_field_radius = parse_value_with_unit(val, "r_b");
    else if (key == "y0") cfg.bs_link_distance = parse_value_with_unit(val, "y0");
    else if (key == "x0") {
        if (val == "null" || val == "zenith") cfg.hap_link_distance.reset();
        else cfg.hap_link_distance = parse_value_with_unit(val, "x0");
    }
    else if (key == "epsilon") cfg.sinr_threshold = parse_value_with_unit(val, "epsilon");
    else if (key == "m") cfg.nakagami_m = as_int("m");
    else if (key == "sigma_sq") cfg.rayleigh_scale = parse_value_with_unit(val, "sigma_sq");
    else if (key == "kappa") cfg.min_terrestrial_coverage = parse_value_with_unit(val, "kappa");
    else if (key == "antenna.directional") cfg.antenna.directional = as_bool(key.c_str());
    else if (key == "antenna.theta_3db") cfg.antenna.theta_3db_deg = parse_value_with_unit(val, key.c_str());
    else if (key == "antenna.mainlobe_exponent") cfg.antenna.mainlobe_exponent = as_int(key.c_str());
    else if (key == "quadrature.abs_tol") cfg.quadrature.abs_tol = parse_value_with_unit(val, key.c_str());
    else if (key == "quadrature.rel_tol") cfg.quadrature.rel_tol = parse_value_with_unit(val, key.c_str());
    else if (key == "quadrature.max_segments") cfg.quadrature.max_segments = as_int(key.c_str());
    else if (key == "search.grid_points") cfg.search.grid_points = as_int(key.c_str());
    else if (key == "search.lambda_min") cfg.search.lambda_min = parse_value_with_unit(val, key.c_str());
    else if (key == "search.lambda_max") cfg.search.lambda_max = parse_value_with_unit(val, key.c_str());
    else if (key == "montecarlo.trials") cfg.montecarlo.trials = static_cast<std::uint64_t>(as_int(key.c_str()));
    else if (key == "montecarlo.n_intervals") cfg.montecarlo.n_intervals = as_int(key.c_str());
    else throw config_error("unknown key " + key);
}

/// Load a config file (empty or missing-key fields default), apply
/// overrides, validate.
inline NetworkConfig load_config(const std::string& path,
                                 const std::vector<std::string>& overrides = {}) {
    NetworkConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config_json(ss.str());
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    cfg.validate();
    return cfg;
}

}  // namespace hapss::io
