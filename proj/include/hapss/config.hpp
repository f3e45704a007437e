#pragma once

// Scenario configuration. Defaults reproduce the reference parameter set
// (transmit powers 50/20 W, noise 1e-9 W, path-loss exponents 2/4, densities
// 1e-10/3e-5 per m^2, earth radius 6371 km, HAP height 20 km, r_b 10 km,
// y0 50 m, epsilon 0.1, m 2, sigma^2 0.5, beamwidth 40 deg). A config is the
// single source of truth for a run; results carry its hash.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "hapss/antenna.hpp"
#include "hapss/errors.hpp"
#include "hapss/geometry.hpp"

namespace hapss {

struct AntennaConfig {
    bool directional = false;
    double theta_3db_deg = 40.0;  // half-power beamwidth, degrees
    int mainlobe_exponent = 2;    // 2 = Gaussian main lobe, 1 = linear dB rolloff

    antenna::AntennaPattern pattern() const {
        return antenna::AntennaPattern::from_beamwidth(
            theta_3db_deg * antenna::kPi / 180.0, mainlobe_exponent);
    }
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_segments = 2000;
};

struct DensitySearchConfig {
    int grid_points = 200;
    double lambda_min = 1e-13;
    double lambda_max = 1e-7;
};

struct MonteCarloConfig {
    std::uint64_t trials = 10000;
    int n_intervals = 64;
};

struct NetworkConfig {
    double hap_tx_power = 50.0;       // P_h [W]
    double bs_tx_power = 20.0;        // P_g [W]
    double noise_power = 1e-9;        // P_n [W]
    double hap_pathloss = 2.0;        // alpha_h
    double bs_pathloss = 4.0;         // alpha_g
    double hap_density = 1e-10;       // lambda_h [1/m^2]
    double bs_density = 3e-5;         // lambda_g [1/m^2]
    double earth_radius = 6371e3;     // a [m]
    double hap_height = 20e3;         // h [m]
    double height_fluctuation = 0.0;  // delta_h [m]
    double bs_field_radius = 10e3;    // r_b [m]
    double bs_link_distance = 50.0;   // y0 [m]
    std::optional<double> hap_link_distance;  // x0 [m]; empty = zenith (= h)
    double sinr_threshold = 0.1;      // epsilon, linear
    int nakagami_m = 2;               // m
    double rayleigh_scale = 0.5;      // sigma^2
    double min_terrestrial_coverage = 0.9;  // kappa

    AntennaConfig antenna;
    QuadratureConfig quadrature;
    DensitySearchConfig search;
    MonteCarloConfig montecarlo;

    double sphere_radius() const { return earth_radius + hap_height; }
    double max_polar_angle() const {
        return geometry::max_polar_angle(earth_radius, hap_height);
    }
    /// Serving HAP distance x0; defaults to the zenith distance h.
    double serving_distance() const { return hap_link_distance.value_or(hap_height); }

    geometry::SphericalCapSpec cap() const {
        return geometry::SphericalCapSpec::from_heights(earth_radius, hap_height);
    }
    geometry::ShellSpec shell() const {
        return geometry::ShellSpec::around(cap(), height_fluctuation);
    }

    void validate() const;
    std::string canonical_json() const;
    std::uint64_t config_hash() const;
    std::string config_hash_hex() const;
};

namespace detail {

inline void require(bool ok, const char* key, const char* what) {
    if (!ok) throw config_error(std::string(key) + ": " + what);
}

inline std::string fmt(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace detail

inline void NetworkConfig::validate() const {
    using detail::require;
    require(hap_tx_power > 0.0, "P_h", "must be positive");
    require(bs_tx_power > 0.0, "P_g", "must be positive");
    require(noise_power > 0.0, "P_n", "must be positive");
    require(hap_pathloss > 0.0, "alpha_h", "must be positive");
    require(bs_pathloss > 0.0, "alpha_g", "must be positive");
    require(hap_density >= 0.0, "lambda_h", "must be >= 0");
    require(bs_density >= 0.0, "lambda_g", "must be >= 0");
    require(earth_radius > 0.0, "a", "must be positive");
    require(hap_height > 0.0, "h", "must be positive");
    require(height_fluctuation >= 0.0 && height_fluctuation < hap_height, "delta_h",
            "must satisfy 0 <= delta_h < h");
    require(bs_field_radius > 0.0, "r_b", "must be positive");
    require(bs_link_distance > 0.0, "y0", "must be positive");
    if (hap_link_distance) require(*hap_link_distance > 0.0, "x0", "must be positive");
    require(sinr_threshold > 0.0, "epsilon", "must be positive");
    require(nakagami_m >= 1, "m", "must be an integer >= 1");
    require(rayleigh_scale > 0.0, "sigma_sq", "must be positive");
    require(min_terrestrial_coverage > 0.0 && min_terrestrial_coverage < 1.0, "kappa",
            "must lie in (0,1)");
    require(antenna.theta_3db_deg > 0.0 && antenna.theta_3db_deg < 180.0,
            "antenna.theta_3db", "must lie in (0, 180) degrees");
    require(antenna.mainlobe_exponent == 1 || antenna.mainlobe_exponent == 2,
            "antenna.mainlobe_exponent", "must be 1 or 2");
    require(quadrature.abs_tol > 0.0, "quadrature.abs_tol", "must be positive");
    require(quadrature.rel_tol > 0.0, "quadrature.rel_tol", "must be positive");
    require(quadrature.max_segments >= 8, "quadrature.max_segments", "must be >= 8");
    require(search.grid_points >= 2, "search.grid_points", "must be >= 2");
    require(search.lambda_min > 0.0 && search.lambda_min < search.lambda_max,
            "search.lambda_min", "must satisfy 0 < lambda_min < lambda_max");
    require(montecarlo.trials >= 1, "montecarlo.trials", "must be >= 1");
    require(montecarlo.n_intervals >= 1, "montecarlo.n_intervals", "must be >= 1");
}

/// Canonical JSON: fixed key order, shortest round-trip number formatting.
/// Equal configs produce identical strings; the hash is FNV-1a over it.
inline std::string NetworkConfig::canonical_json() const {
    using detail::fmt;
    std::string s = "{\n";
    s += "  \"schema_version\": 1,\n";
    s += "  \"P_h\": " + fmt(hap_tx_power) + ",\n";
    s += "  \"P_g\": " + fmt(bs_tx_power) + ",\n";
    s += "  \"P_n\": " + fmt(noise_power) + ",\n";
    s += "  \"alpha_h\": " + fmt(hap_pathloss) + ",\n";
    s += "  \"alpha_g\": " + fmt(bs_pathloss) + ",\n";
    s += "  \"lambda_h\": " + fmt(hap_density) + ",\n";
    s += "  \"lambda_g\": " + fmt(bs_density) + ",\n";
    s += "  \"a\": " + fmt(earth_radius) + ",\n";
    s += "  \"h\": " + fmt(hap_height) + ",\n";
    s += "  \"delta_h\": " + fmt(height_fluctuation) + ",\n";
    s += "  \"r_b\": " + fmt(bs_field_radius) + ",\n";
    s += "  \"y0\": " + fmt(bs_link_distance) + ",\n";
    s += "  \"x0\": " + (hap_link_distance ? fmt(*hap_link_distance) : "null") + ",\n";
    s += "  \"epsilon\": " + fmt(sinr_threshold) + ",\n";
    s += "  \"m\": " + std::to_string(nakagami_m) + ",\n";
    s += "  \"sigma_sq\": " + fmt(rayleigh_scale) + ",\n";
    s += "  \"kappa\": " + fmt(min_terrestrial_coverage) + ",\n";
    s += "  \"antenna\": {\"directional\": " +
         std::string(antenna.directional ? "true" : "false") +
         ", \"theta_3db\": " + fmt(antenna.theta_3db_deg) +
         ", \"mainlobe_exponent\": " + std::to_string(antenna.mainlobe_exponent) + "},\n";
    s += "  \"quadrature\": {\"abs_tol\": " + fmt(quadrature.abs_tol) +
         ", \"rel_tol\": " + fmt(quadrature.rel_tol) +
         ", \"max_segments\": " + std::to_string(quadrature.max_segments) + "},\n";
    s += "  \"search\": {\"grid_points\": " + std::to_string(search.grid_points) +
         ", \"lambda_min\": " + fmt(search.lambda_min) +
         ", \"lambda_max\": " + fmt(search.lambda_max) + "},\n";
    s += "  \"montecarlo\": {\"trials\": " + std::to_string(montecarlo.trials) +
         ", \"n_intervals\": " + std::to_string(montecarlo.n_intervals) + "}\n";
    s += "}\n";
    return s;
}

inline std::uint64_t NetworkConfig::config_hash() const {
    return detail::fnv1a(canonical_json());
}

inline std::string NetworkConfig::config_hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash()));
    return std::string(buf);
}

}  // namespace hapss
