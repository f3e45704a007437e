#pragma once

// Fixed directional antenna: Gaussian-shaped main lobe, flat side lobes.
// The beam axis points at nadir, so the serving HAP (at the user's zenith)
// transmits at peak gain and interferers are seen at the off-axis angle
// determined by their polar angle on the sphere.

#include <cmath>
#include <stdexcept>

namespace hapss::antenna {

inline constexpr double kPi = 3.14159265358979323846;

struct AntennaPattern {
    double theta_3db;        // half-power beamwidth [rad]
    int mainlobe_exponent;   // 1: linear-in-angle dB rolloff as printed in the
                             // source model; 2: Gaussian main lobe (default)
    double peak_gain_db;     // G0
    double mainlobe_width;   // theta_ml = 2.6 * theta_3db [rad]
    double sidelobe_db;      // G_sl

    /// theta_3db in radians. G_sl's log argument is the beamwidth in degrees
    /// (the side-lobe fit is specified against degrees).
    static AntennaPattern from_beamwidth(double theta_3db, int mainlobe_exponent = 2) {
        if (!(theta_3db > 0.0) || theta_3db >= kPi)
            throw std::domain_error("theta_3db must lie in (0, pi)");
        if (mainlobe_exponent != 1 && mainlobe_exponent != 2)
            throw std::domain_error("mainlobe exponent must be 1 or 2");
        AntennaPattern p;
        p.theta_3db = theta_3db;
        p.mainlobe_exponent = mainlobe_exponent;
        p.peak_gain_db = 10.0 * std::log10(1.6162 / std::sin(theta_3db / 2.0));
        p.mainlobe_width = 2.6 * theta_3db;
        p.sidelobe_db = -0.4111 * std::log(theta_3db * 180.0 / kPi) - 10.597;
        return p;
    }

    double gain_db(double beta) const {
        if (beta < 0.0 || beta > kPi)
            throw std::domain_error("off-axis angle outside [0, pi]");
        if (beta <= 0.5 * mainlobe_width) {
            const double u = 2.0 * beta / theta_3db;
            return peak_gain_db - 3.01 * (mainlobe_exponent == 2 ? u * u : u);
        }
        return sidelobe_db;
    }

    /// Linear power gain 10^{dB/10}; strictly positive.
    double gain(double beta) const { return std::pow(10.0, gain_db(beta) / 10.0); }

    double peak_gain() const { return std::pow(10.0, peak_gain_db / 10.0); }
    double sidelobe_gain() const { return std::pow(10.0, sidelobe_db / 10.0); }
};

/// Angle between the HAP->user link and the HAP's nadir axis for a HAP at
/// polar angle theta on the sphere of radius b: arccos((b - a cos th)/d).
inline double offaxis_angle(double theta, double a, double b) {
    if (theta < 0.0) throw std::domain_error("offaxis_angle: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    const double d = std::sqrt(a * a + b * b - 2.0 * a * b * std::cos(theta));
    double c = (b - a * std::cos(theta)) / d;
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c);
}

/// Polar angle at which the off-axis angle reaches the given value, or the
/// cap edge t if it never does. offaxis_angle is increasing on [0, t].
inline double offaxis_angle_inverse(double beta_target, double a, double b, double t) {
    if (offaxis_angle(t, a, b) <= beta_target) return t;
    double lo = 0.0, hi = t;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (offaxis_angle(mid, a, b) < beta_target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hapss::antenna
