#pragma once

// Closed-form network performance: Laplace transforms of the aggregate
// interference seen by the typical HAP user and the typical BS user,
// exact and approximate coverage probabilities, hover-fluctuation and
// directional-antenna variants, transmission capacity and the optimal
// HAP density (closed-form bounds plus numeric search).
//
// All phi integrals are resolved analytically (the integrands do not
// depend on azimuth); the remaining theta / radius / shell integrals run
// through the adaptive Gauss-Kronrod rule in quadrature.hpp.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hapss/antenna.hpp"
#include "hapss/channels.hpp"
#include "hapss/config.hpp"
#include "hapss/errors.hpp"
#include "hapss/geometry.hpp"
#include "hapss/quadrature.hpp"

namespace hapss::analytic {

inline constexpr double kPi = geometry::kPi;

enum class Method { exact, approximate, monte_carlo };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::approximate: return "approximate";
        default: return "monte_carlo";
    }
}

struct CoverageResult {
    double value = 0.0;
    Method method = Method::exact;
    double abs_error_estimate = 0.0;
    struct Metadata {
        std::uint64_t config_hash = 0;
        double quadrature_residual = 0.0;  // largest relative residual seen
        std::string assumptions;
    } metadata;
};

namespace detail {

struct TransformValue {
    double value = 1.0;     // the Laplace transform L(s) in (0,1]
    double rel_error = 0.0; // abs error of the exponent == rel error of L
};

struct DerivValue {
    double value = 0.0;     // dL/ds (non-positive)
    double rel_error = 0.0;
};

inline quad::Options quad_options(const NetworkConfig& cfg) {
    return quad::Options{cfg.quadrature.abs_tol, cfg.quadrature.rel_tol,
                         cfg.quadrature.max_segments, true};
}

// Interference from the HAP field. weight(theta) multiplies s in the fading
// kernel: 1 for the omnidirectional theorems, G(beta)/G(beta0) or
// (P_h/P_g) G(beta) for the directional ones. theta_breaks mark gain-pattern
// kinks so each smooth piece is integrated separately.
struct HapField {
    double lambda;                         // surface density [1/m^2]
    double b;                              // sphere radius
    double t;                              // cap extent
    double a;                              // earth radius
    double alpha;                          // path-loss exponent
    int m;                                 // Nakagami shape
    std::function<double(double)> weight;  // empty (= 1) for omni
    std::vector<double> theta_breaks;
};

// 1 - m^m/(m + x)^m = -expm1(-m log1p(x/m)); exact for tiny x.
inline double fading_kernel(double x, int m) {
    return -std::expm1(-m * std::log1p(x / m));
}

// d/ds [1 - m^m/(m+s u)^m] = u (1 + s u/m)^{-(m+1)}
inline double fading_kernel_deriv(double s, double u, int m) {
    return u * std::exp(-(m + 1) * std::log1p(s * u / m));
}

inline TransformValue hap_laplace(double s, const HapField& f, const quad::Options& opt) {
    TransformValue out;
    if (s == 0.0 || f.lambda == 0.0) return out;
    auto integrand = [&](double th) {
        const double d = geometry::distance_to_typical_user(f.b, th, f.a);
        const double w = f.weight ? f.weight(th) : 1.0;
        return fading_kernel(s * w * std::pow(d, -f.alpha), f.m) * f.b * f.b * std::sin(th);
    };
    const auto r = quad::integrate_split(integrand, 0.0, f.t, f.theta_breaks, opt);
    const double expo = f.lambda * 2.0 * kPi * r.value;
    out.value = std::exp(-expo);
    out.rel_error = f.lambda * 2.0 * kPi * r.error;
    return out;
}

inline DerivValue hap_laplace_deriv(double s, const HapField& f, const quad::Options& opt) {
    DerivValue out;
    if (f.lambda == 0.0) return out;
    const TransformValue L = hap_laplace(s, f, opt);
    auto integrand = [&](double th) {
        const double d = geometry::distance_to_typical_user(f.b, th, f.a);
        const double w = f.weight ? f.weight(th) : 1.0;
        const double u = w * std::pow(d, -f.alpha);
        return fading_kernel_deriv(s, u, f.m) * f.b * f.b * std::sin(th);
    };
    const auto r = quad::integrate_split(integrand, 0.0, f.t, f.theta_breaks, opt);
    out.value = L.value * (-f.lambda * 2.0 * kPi * r.value);
    out.rel_error = L.rel_error + (r.value > 0.0 ? r.error / r.value : 0.0);
    return out;
}

// Shell variant: volume density lambda/(2 dh) over r in [b-dh, b+dh].
inline TransformValue hap_laplace_shell(double s, const HapField& f, double dh,
                                        const quad::Options& opt) {
    if (dh <= 0.0) return hap_laplace(s, f, opt);
    TransformValue out;
    if (s == 0.0 || f.lambda == 0.0) return out;
    quad::Options inner = opt;
    inner.rel_tol *= 0.1;
    auto outer = [&](double th) {
        const double w = f.weight ? f.weight(th) : 1.0;
        auto radial = [&](double r) {
            const double d = geometry::distance_to_typical_user(r, th, f.a);
            return fading_kernel(s * w * std::pow(d, -f.alpha), f.m) * r * r;
        };
        const auto ri = quad::integrate(radial, f.b - dh, f.b + dh, inner);
        return ri.value * std::sin(th);
    };
    const auto r = quad::integrate_split(outer, 0.0, f.t, f.theta_breaks, opt);
    const double lam_vol = f.lambda / (2.0 * dh);
    out.value = std::exp(-lam_vol * 2.0 * kPi * r.value);
    out.rel_error = lam_vol * 2.0 * kPi * r.error;
    return out;
}

// Interference from the BS disk. coeff c multiplies s y^{-alpha} in the
// Rayleigh kernel: 2 sigma^2 P_g/P_h at the HAP user, 2 sigma^2 at the BS
// user, with the serving gain folded in for the directional theorems.
struct DiskField {
    double lambda;
    double radius;
    double alpha;
    double coeff;
};

inline TransformValue disk_laplace(double s, const DiskField& f, const quad::Options& opt) {
    TransformValue out;
    if (s == 0.0 || f.lambda == 0.0) return out;
    const double cs = f.coeff * s;
    auto integrand = [&](double y) {
        // 1 - 1/(1 + cs y^-alpha) written to stay finite at y = 0
        return y / (1.0 + std::pow(y, f.alpha) / cs);
    };
    const auto r = quad::integrate(integrand, 0.0, f.radius, opt);
    const double expo = f.lambda * 2.0 * kPi * r.value;
    out.value = std::exp(-expo);
    out.rel_error = f.lambda * 2.0 * kPi * r.error;
    return out;
}

inline DerivValue disk_laplace_deriv(double s, const DiskField& f, const quad::Options& opt) {
    DerivValue out;
    if (f.lambda == 0.0) return out;
    const TransformValue L = disk_laplace(s, f, opt);
    auto integrand = [&](double y) {
        const double ya = std::pow(y, f.alpha);
        const double den = 1.0 + f.coeff * s / ya;
        // c y^-alpha / (1 + c s y^-alpha)^2 * y, finite at y = 0
        return f.coeff * y / (ya * den * den);
    };
    const auto r = quad::integrate(integrand, 0.0, f.radius, opt);
    out.value = L.value * (-f.lambda * 2.0 * kPi * r.value);
    out.rel_error = L.rel_error + (r.value > 0.0 ? r.error / r.value : 0.0);
    return out;
}

// Directional gain model resolved from the config. Omni behaves as a unit
// pattern: serving gain 1, weight 1, no breakpoints.
struct GainModel {
    bool directional = false;
    antenna::AntennaPattern pattern{};
    double serving_gain = 1.0;

    std::function<double(double)> interferer_weight(double a, double b,
                                                    double scale) const {
        if (!directional) {
            if (scale == 1.0) return {};
            return [scale](double) { return scale; };
        }
        const auto pat = pattern;
        return [pat, a, b, scale](double th) {
            return scale * pat.gain(antenna::offaxis_angle(th, a, b));
        };
    }

    std::vector<double> breaks(double a, double b, double t) const {
        if (!directional) return {};
        const double bstar =
            antenna::offaxis_angle_inverse(0.5 * pattern.mainlobe_width, a, b, t);
        if (bstar > 0.0 && bstar < t) return {bstar};
        return {};
    }
};

inline GainModel gain_model(const NetworkConfig& cfg) {
    GainModel g;
    g.directional = cfg.antenna.directional;
    if (g.directional) {
        g.pattern = cfg.antenna.pattern();
        g.serving_gain = g.pattern.peak_gain();
    }
    return g;
}

inline HapField hap_field(const NetworkConfig& cfg, double weight_scale,
                          const GainModel* gm) {
    HapField f;
    f.lambda = cfg.hap_density;
    f.b = cfg.sphere_radius();
    f.t = cfg.max_polar_angle();
    f.a = cfg.earth_radius;
    f.alpha = cfg.hap_pathloss;
    f.m = cfg.nakagami_m;
    if (gm) {
        f.weight = gm->interferer_weight(cfg.earth_radius, f.b, weight_scale);
        f.theta_breaks = gm->breaks(cfg.earth_radius, f.b, f.t);
    } else if (weight_scale != 1.0) {
        f.weight = [weight_scale](double) { return weight_scale; };
    }
    return f;
}

inline std::string assumption_note(const NetworkConfig& cfg) {
    std::string s = cfg.hap_link_distance ? "x0=configured" : "x0=zenith(h)";
    s += ";beta0=0;log=nats";
    if (cfg.antenna.directional)
        s += ";mainlobe_exponent=" + std::to_string(cfg.antenna.mainlobe_exponent);
    return s;
}

inline CoverageResult finish(double value, Method method, double abs_err,
                             double residual, const NetworkConfig& cfg) {
    if (value < -1e-9 || value > 1.0 + 1e-9)
        throw numerical_error("coverage left [0,1] beyond tolerance",
                              value < 0.0 ? -value : value - 1.0);
    CoverageResult r;
    r.value = std::min(1.0, std::max(0.0, value));
    r.method = method;
    r.abs_error_estimate = abs_err;
    r.metadata.config_hash = cfg.config_hash();
    r.metadata.quadrature_residual = residual;
    r.metadata.assumptions = assumption_note(cfg);
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Laplace transforms at the spec'd interfaces
// ---------------------------------------------------------------------------

/// HAP interference at the HAP user (omnidirectional cap field).
inline double laplace_Ih1(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    return detail::hap_laplace(s, detail::hap_field(cfg, 1.0, nullptr),
                               detail::quad_options(cfg)).value;
}

/// BS interference at the HAP user.
inline double laplace_Ig1(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    detail::DiskField f{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                        2.0 * cfg.rayleigh_scale * cfg.bs_tx_power / cfg.hap_tx_power};
    return detail::disk_laplace(s, f, detail::quad_options(cfg)).value;
}

/// k-th derivative of laplace_Ih1. Supported orders: 0 and 1; higher orders
/// are only needed by the exact theorem beyond m = 2, use the approximate
/// coverage there instead.
inline double laplace_Ih1_deriv(double s, const NetworkConfig& cfg, int order) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    if (order == 0) return laplace_Ih1(s, cfg);
    if (order != 1)
        throw capability_error(
            "Laplace derivatives of order >= 2 are not provided; use the "
            "approximate coverage expression");
    return detail::hap_laplace_deriv(s, detail::hap_field(cfg, 1.0, nullptr),
                                     detail::quad_options(cfg)).value;
}

/// HAP interference at the BS user (P_h/P_g folded into the kernel).
inline double laplace_Ih2(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    return detail::hap_laplace(
               s, detail::hap_field(cfg, cfg.hap_tx_power / cfg.bs_tx_power, nullptr),
               detail::quad_options(cfg)).value;
}

/// BS interference at the BS user.
inline double laplace_Ig2(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    detail::DiskField f{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                        2.0 * cfg.rayleigh_scale};
    return detail::disk_laplace(s, f, detail::quad_options(cfg)).value;
}

/// Directional HAP interference at the HAP user: gain ratio G(beta)/G(beta0)
/// in the kernel. Falls back to laplace_Ih1 when the antenna is omni.
inline double laplace_Ih3(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    const auto gm = detail::gain_model(cfg);
    auto f = detail::hap_field(cfg, 1.0 / gm.serving_gain, &gm);
    return detail::hap_laplace(s, f, detail::quad_options(cfg)).value;
}

/// BS interference at the directional HAP user (serving gain in the ratio).
inline double laplace_Ig3(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    const auto gm = detail::gain_model(cfg);
    detail::DiskField f{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                        2.0 * cfg.rayleigh_scale * cfg.bs_tx_power /
                            (cfg.hap_tx_power * gm.serving_gain)};
    return detail::disk_laplace(s, f, detail::quad_options(cfg)).value;
}

/// Side-lobe-weighted HAP interference at the BS user.
inline double laplace_Ih4(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    const auto gm = detail::gain_model(cfg);
    auto f = detail::hap_field(cfg, cfg.hap_tx_power / cfg.bs_tx_power, &gm);
    return detail::hap_laplace(s, f, detail::quad_options(cfg)).value;
}

/// BS interference at the BS user under directional HAPs (same as Ig2).
inline double laplace_Ig4(double s, const NetworkConfig& cfg) {
    return laplace_Ig2(s, cfg);
}

/// Shell version of laplace_Ih1 (HAPs fluctuating within +/- delta_h).
inline double laplace_Ih1_shell(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    return detail::hap_laplace_shell(s, detail::hap_field(cfg, 1.0, nullptr),
                                     cfg.height_fluctuation,
                                     detail::quad_options(cfg)).value;
}

/// Shell version of laplace_Ih3.
inline double laplace_Ih3_shell(double s, const NetworkConfig& cfg) {
    if (s < 0.0) throw std::domain_error("laplace transform needs s >= 0");
    const auto gm = detail::gain_model(cfg);
    auto f = detail::hap_field(cfg, 1.0 / gm.serving_gain, &gm);
    return detail::hap_laplace_shell(s, f, cfg.height_fluctuation,
                                     detail::quad_options(cfg)).value;
}

// ---------------------------------------------------------------------------
// Coverage probabilities
// ---------------------------------------------------------------------------

namespace detail {

// Exact assembly shared by the omni and directional theorems:
//   e^{-sA} sum_{k<m} s^k/k! sum_{l<=k} C(k,l) A^l (-1)^{k-l}
//           sum_{z<=k-l} C(k-l,z) Lh^{(z)} Lg^{(k-l-z)}   at s = m eps x0^alpha
// with A the noise-to-serving-power ratio. m <= 2 keeps the derivative
// order at 1.
inline CoverageResult coverage_exact_impl(const NetworkConfig& cfg,
                                          const GainModel& gm) {
    cfg.validate();
    const int m = cfg.nakagami_m;
    if (m > 2)
        throw capability_error(
            "exact coverage supports m in {1,2}; higher shapes need Laplace "
            "derivatives of order >= 2, use the approximate coverage");
    const auto opt = quad_options(cfg);
    const double x0 = cfg.serving_distance();
    const double s = m * cfg.sinr_threshold * std::pow(x0, cfg.hap_pathloss);
    const double A = cfg.noise_power / (cfg.hap_tx_power * gm.serving_gain);

    const auto hf = hap_field(cfg, 1.0 / gm.serving_gain, &gm);
    const DiskField gf{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                       2.0 * cfg.rayleigh_scale * cfg.bs_tx_power /
                           (cfg.hap_tx_power * gm.serving_gain)};

    // derivative tables up to order m-1 (<= 1)
    std::vector<double> Lh(m), Lg(m), eLh(m), eLg(m);
    const auto lh0 = hap_laplace(s, hf, opt);
    const auto lg0 = disk_laplace(s, gf, opt);
    Lh[0] = lh0.value; eLh[0] = lh0.rel_error;
    Lg[0] = lg0.value; eLg[0] = lg0.rel_error;
    if (m == 2) {
        const auto lh1 = hap_laplace_deriv(s, hf, opt);
        const auto lg1 = disk_laplace_deriv(s, gf, opt);
        Lh[1] = lh1.value; eLh[1] = lh1.rel_error;
        Lg[1] = lg1.value; eLg[1] = lg1.rel_error;
    }

    auto binom = [](int n, int k) {
        double c = 1.0;
        for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return c;
    };

    double sum = 0.0, err = 0.0;
    double sk = 1.0;  // s^k / k!
    for (int k = 0; k < m; ++k) {
        if (k > 0) sk *= s / k;
        for (int l = 0; l <= k; ++l) {
            const double al = binom(k, l) * std::pow(A, l);
            const double sign = ((k - l) % 2 == 0) ? 1.0 : -1.0;
            for (int z = 0; z <= k - l; ++z) {
                const double term = sk * al * sign * binom(k - l, z) * Lh[z] * Lg[k - l - z];
                sum += term;
                err += std::fabs(term) * (eLh[z] + eLg[k - l - z]);
            }
        }
    }
    const double noise = std::exp(-s * A);
    double residual = 0.0;
    for (int i = 0; i < m; ++i) residual = std::max({residual, eLh[i], eLg[i]});
    return finish(noise * sum, Method::exact, noise * err, residual, cfg);
}

// Approximate assembly (alternating binomial sum at s_k = k eta2 m eps x0^a).
inline CoverageResult coverage_approx_impl(const NetworkConfig& cfg,
                                           const GainModel& gm, double dh) {
    cfg.validate();
    const int m = cfg.nakagami_m;
    const auto opt = quad_options(cfg);
    const double eta2 = channels::lemma1_eta(m).second;
    const double A = cfg.noise_power / (cfg.hap_tx_power * gm.serving_gain);
    const auto hf = hap_field(cfg, 1.0 / gm.serving_gain, &gm);
    const DiskField gf{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                       2.0 * cfg.rayleigh_scale * cfg.bs_tx_power /
                           (cfg.hap_tx_power * gm.serving_gain)};

    auto binom = [](int n, int k) {
        double c = 1.0;
        for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return c;
    };

    auto eval_at = [&](double x0, double& err_out, double& res_out) {
        double sum = 0.0, err = 0.0, residual = 0.0;
        for (int k = 1; k <= m; ++k) {
            const double s = k * eta2 * m * cfg.sinr_threshold * std::pow(x0, cfg.hap_pathloss);
            const auto lh = (dh > 0.0) ? hap_laplace_shell(s, hf, dh, opt)
                                       : hap_laplace(s, hf, opt);
            const auto lg = disk_laplace(s, gf, opt);
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            const double term = binom(m, k) * sign * std::exp(-s * A) * lh.value * lg.value;
            sum += term;
            err += std::fabs(term) * (lh.rel_error + lg.rel_error);
            residual = std::max({residual, lh.rel_error, lg.rel_error});
        }
        err_out = err;
        res_out = residual;
        return sum;
    };

    if (dh <= 0.0) {
        double err = 0.0, res = 0.0;
        const double v = eval_at(cfg.serving_distance(), err, res);
        return finish(v, Method::approximate, err, res, cfg);
    }

    // Fluctuation: serving distance x0 = r0 - a with r0 uniform on
    // [b - dh, b + dh]; coverage is the average over r0.
    const double b = cfg.sphere_radius();
    double err_acc = 0.0, res_acc = 0.0;
    quad::Options xopt = opt;
    xopt.rel_tol = std::max(opt.rel_tol, 1e-7);
    auto integrand = [&](double r0) {
        double e = 0.0, r = 0.0;
        const double v = eval_at(r0 - cfg.earth_radius, e, r);
        err_acc = std::max(err_acc, e);
        res_acc = std::max(res_acc, r);
        return v;
    };
    const auto avg = quad::integrate(integrand, b - dh, b + dh, xopt);
    const double v = avg.value / (2.0 * dh);
    return finish(v, Method::approximate, err_acc + avg.error / (2.0 * dh), res_acc, cfg);
}

}  // namespace detail

/// Exact coverage of the HAP user, omnidirectional antennas (m in {1,2}).
inline CoverageResult coverage_hap_exact(const NetworkConfig& cfg) {
    return detail::coverage_exact_impl(cfg, detail::GainModel{});
}

/// Approximate coverage of the HAP user, omnidirectional antennas.
inline CoverageResult coverage_hap_approx(const NetworkConfig& cfg) {
    return detail::coverage_approx_impl(cfg, detail::GainModel{}, 0.0);
}

/// Approximate HAP coverage under height fluctuation: shell interference
/// field and serving distance averaged over the shell.
inline CoverageResult coverage_hap_fluct(const NetworkConfig& cfg) {
    if (!(cfg.height_fluctuation > 0.0))
        throw std::domain_error("coverage_hap_fluct needs delta_h > 0");
    return detail::coverage_approx_impl(cfg, detail::GainModel{}, cfg.height_fluctuation);
}

/// Exact coverage of the HAP user with the configured antenna pattern.
inline CoverageResult coverage_hap_directional_exact(const NetworkConfig& cfg) {
    return detail::coverage_exact_impl(cfg, detail::gain_model(cfg));
}

/// Approximate coverage of the HAP user with the configured antenna pattern.
inline CoverageResult coverage_hap_directional_approx(const NetworkConfig& cfg) {
    return detail::coverage_approx_impl(cfg, detail::gain_model(cfg), 0.0);
}

/// Directional coverage under height fluctuation.
inline CoverageResult coverage_hap_directional_fluct(const NetworkConfig& cfg) {
    if (!(cfg.height_fluctuation > 0.0))
        throw std::domain_error("coverage_hap_directional_fluct needs delta_h > 0");
    return detail::coverage_approx_impl(cfg, detail::gain_model(cfg),
                                        cfg.height_fluctuation);
}

namespace detail {

inline CoverageResult coverage_terrestrial_impl(const NetworkConfig& cfg,
                                                bool directional) {
    cfg.validate();
    const auto opt = quad_options(cfg);
    const double s = cfg.sinr_threshold *
                     std::pow(cfg.bs_link_distance, cfg.bs_pathloss) /
                     (2.0 * cfg.rayleigh_scale);
    GainModel gm;
    if (directional) gm = gain_model(cfg);
    // HAP kernel carries the absolute gain and the P_h/P_g power ratio; the
    // serving link is the BS one, so no serving-gain normalization.
    auto hf = hap_field(cfg, cfg.hap_tx_power / cfg.bs_tx_power, &gm);
    const DiskField gf{cfg.bs_density, cfg.bs_field_radius, cfg.bs_pathloss,
                       2.0 * cfg.rayleigh_scale};
    const auto lh = hap_laplace(s, hf, opt);
    const auto lg = disk_laplace(s, gf, opt);
    const double noise = std::exp(-s * cfg.noise_power / cfg.bs_tx_power);
    const double v = noise * lh.value * lg.value;
    const double err = v * (lh.rel_error + lg.rel_error);
    return finish(v, Method::exact, err, std::max(lh.rel_error, lg.rel_error), cfg);
}

}  // namespace detail

/// Coverage of the typical BS user, omnidirectional HAPs.
inline CoverageResult coverage_terrestrial(const NetworkConfig& cfg) {
    return detail::coverage_terrestrial_impl(cfg, false);
}

/// Coverage of the typical BS user with directional HAP interference.
inline CoverageResult coverage_terrestrial_directional(const NetworkConfig& cfg) {
    return detail::coverage_terrestrial_impl(cfg, true);
}

// ---------------------------------------------------------------------------
// Transmission capacity and optimal density
// ---------------------------------------------------------------------------

/// T_C = lambda_h * Pr{SINR > eps} * ln(1 + eps)  [nats / (s Hz m^2) scale].
inline double transmission_capacity(
    const NetworkConfig& cfg,
    const std::function<CoverageResult(const NetworkConfig&)>& coverage_fn) {
    return cfg.hap_density * coverage_fn(cfg).value * std::log1p(cfg.sinr_threshold);
}

/// Capacity with the default coverage choice for the configured antenna.
inline double transmission_capacity(const NetworkConfig& cfg) {
    return transmission_capacity(cfg, cfg.antenna.directional
                                          ? coverage_hap_directional_approx
                                          : coverage_hap_approx);
}

/// Closed-form bracket for the capacity-maximizing HAP density. For the
/// directional pattern the free gain ratio in the printed bound is resolved
/// conservatively: ratio 1 in the lower bound, the smallest ratio over the
/// visible off-axis range in the upper bound, which keeps the bracket valid.
inline std::pair<double, double> optimal_density_bounds(const NetworkConfig& cfg) {
    cfg.validate();
    const int m = cfg.nakagami_m;
    const double eta2 = channels::lemma1_eta(m).second;
    const double eps = cfg.sinr_threshold;
    const double h = cfg.hap_height;
    const double a = cfg.earth_radius;
    const double b = a + h;
    const double area = 2.0 * kPi * h * (h + a);

    double g_lo = 1.0, g_hi = 1.0;
    if (cfg.antenna.directional) {
        const auto pat = cfg.antenna.pattern();
        const double beta_max = std::asin(a / b);
        const double g0 = pat.peak_gain();
        double gmin = pat.gain(beta_max);
        if (beta_max >= 0.5 * pat.mainlobe_width)
            gmin = std::min(gmin, pat.gain(0.5 * pat.mainlobe_width));
        g_hi = gmin / g0;  // upper bound uses the weakest interferer gain
    }

    const double lo_bracket = -std::expm1(-m * std::log1p(m * eta2 * eps * g_lo / m));
    // bracket rewritten from the printed surd form:
    //   1 - (b+a)^{m a_h/2} / ((b+a)^{a_h/2} + eta2 eps g (b-a)^{a_h/2})^m
    const double sp = std::pow(b + a, cfg.hap_pathloss / 2.0);
    const double sm = std::pow(b - a, cfg.hap_pathloss / 2.0);
    const double hi_bracket = 1.0 - std::pow(sp, m) / std::pow(sp + eta2 * eps * g_hi * sm, m);

    const double lower = 1.0 / (area * lo_bracket);
    const double upper = 1.0 / (area * hi_bracket);
    return {lower, upper};
}

struct DensitySearchResult {
    double lambda_opt = 0.0;
    double capacity_opt = 0.0;
    bool constraint_active = false;
    bool unimodal_scan = true;  // single slope sign change along the grid
};

/// Log-grid scan of T_C over [lambda_min, lambda_max] refined by golden
/// section. With use_constraint, densities violating the terrestrial
/// coverage floor kappa are excluded.
inline DensitySearchResult optimal_density_search(const NetworkConfig& cfg,
                                                  bool use_constraint) {
    cfg.validate();
    const int n = cfg.search.grid_points;
    const double llo = std::log(cfg.search.lambda_min);
    const double lhi = std::log(cfg.search.lambda_max);

    auto capacity_at = [&](double lam) {
        NetworkConfig c = cfg;
        c.hap_density = lam;
        return transmission_capacity(c);
    };
    auto feasible = [&](double lam) {
        if (!use_constraint) return true;
        NetworkConfig c = cfg;
        c.hap_density = lam;
        const auto cov = cfg.antenna.directional ? coverage_terrestrial_directional(c)
                                                 : coverage_terrestrial(c);
        return cov.value > cfg.min_terrestrial_coverage;
    };

    std::vector<double> grid(n), tc(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
        tc[i] = capacity_at(grid[i]);
    }

    int sign_changes = 0;
    for (int i = 2; i < n; ++i) {
        const bool up_prev = tc[i - 1] >= tc[i - 2];
        const bool up_now = tc[i] >= tc[i - 1];
        if (up_prev && !up_now) ++sign_changes;
        if (!up_prev && up_now) ++sign_changes;
    }

    int best = -1;
    int best_unconstrained = 0;
    for (int i = 0; i < n; ++i) {
        if (tc[i] > tc[best_unconstrained]) best_unconstrained = i;
        if (feasible(grid[i]) && (best < 0 || tc[i] > tc[best])) best = i;
    }
    if (best < 0) throw infeasible_error("no density satisfies the terrestrial coverage constraint");

    // golden-section refinement in log space around the best grid point
    double xl = best > 0 ? std::log(grid[best - 1]) : llo;
    double xr = best + 1 < n ? std::log(grid[best + 1]) : lhi;
    const double gr = 0.6180339887498949;
    double x1 = xr - gr * (xr - xl), x2 = xl + gr * (xr - xl);
    double f1 = capacity_at(std::exp(x1)), f2 = capacity_at(std::exp(x2));
    for (int it = 0; it < 60 && (xr - xl) > 1e-6; ++it) {
        if (f1 < f2) {
            xl = x1; x1 = x2; f1 = f2;
            x2 = xl + gr * (xr - xl);
            f2 = capacity_at(std::exp(x2));
        } else {
            xr = x2; x2 = x1; f2 = f1;
            x1 = xr - gr * (xr - xl);
            f1 = capacity_at(std::exp(x1));
        }
    }
    double lam_opt = std::exp(0.5 * (xl + xr));
    if (use_constraint && !feasible(lam_opt)) lam_opt = grid[best];

    DensitySearchResult res;
    res.lambda_opt = lam_opt;
    res.capacity_opt = capacity_at(lam_opt);
    res.constraint_active = use_constraint && best != best_unconstrained;
    res.unimodal_scan = sign_changes <= 1;
    return res;
}

}  // namespace hapss::analytic
