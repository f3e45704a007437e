#pragma once

// Fixed CSV schemas (RFC-4180 subset: no quoting needed, '.' decimal).
//   point cloud : tier,param1,param2,param3,x,y,z        (9 significant digits)
//   coverage    : sweep_axis,value,method,coverage,ci95,seed,config_hash
//   capacity    : sweep_axis,value,method,capacity,coverage,ci95,seed,config_hash

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "hapss/geometry.hpp"

namespace hapss::csv {

inline std::string sig9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline constexpr const char* kPointHeader = "tier,param1,param2,param3,x,y,z";

inline void write_point_cloud(std::ostream& os, const geometry::PointSet& ps) {
    os << kPointHeader << '\n';
    const char* tier = ps.tier == geometry::Tier::HAP ? "HAP" : "BS";
    for (const auto& p : ps.points) {
        os << tier << ',' << sig9(p.params[0]) << ',' << sig9(p.params[1]) << ',';
        if (p.n_params > 2) os << sig9(p.params[2]);
        os << ',' << sig9(p.cartesian[0]) << ',' << sig9(p.cartesian[1]) << ','
           << sig9(p.cartesian[2]) << '\n';
    }
}

inline constexpr const char* kCoverageHeader =
    "sweep_axis,value,method,coverage,ci95,seed,config_hash";

inline void write_coverage_row(std::ostream& os, const std::string& axis,
                               double value, const std::string& method,
                               double coverage, double ci95, std::uint64_t seed,
                               const std::string& config_hash) {
    os << axis << ',' << sig9(value) << ',' << method << ',' << sig9(coverage)
       << ',' << sig9(ci95) << ',' << seed << ',' << config_hash << '\n';
}

inline constexpr const char* kCapacityHeader =
    "sweep_axis,value,method,capacity,coverage,ci95,seed,config_hash";

inline void write_capacity_row(std::ostream& os, const std::string& axis,
                               double value, const std::string& method,
                               double capacity, double coverage, double ci95,
                               std::uint64_t seed, const std::string& config_hash) {
    os << axis << ',' << sig9(value) << ',' << method << ',' << sig9(capacity)
       << ',' << sig9(coverage) << ',' << sig9(ci95) << ',' << seed << ','
       << config_hash << '\n';
}

}  // namespace hapss::csv
