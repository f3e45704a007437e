#pragma once

// Empirical estimator of every coverage quantity. Each trial realizes the
// HAP field (cap, shell, or plane baseline) and the BS disk through the
// geometry samplers, draws per-link fading, forms the SINR at the typical
// user and compares against the threshold.
//
// Stream layout (master seed is the Philox key; ids via derive_stream):
//   trial_key   = root(stream 0).child(trial_index)
//   hap field   = trial_key.child(1)   (cap/shell cells derive children)
//   bs field    = trial_key.child(2)
//   hap fading  = trial_key.child(3)   (one draw per emitted point)
//   bs fading   = trial_key.child(4)
//   serving     = trial_key.child(5)   (serving fade, fluctuating x0)
// The layout is scenario-independent, so paired scenarios share randomness
// (common random numbers), and trial results do not depend on scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hapss/analytic.hpp"
#include "hapss/channels.hpp"
#include "hapss/config.hpp"
#include "hapss/errors.hpp"
#include "hapss/geometry.hpp"
#include "hapss/parallel.hpp"
#include "hapss/rng.hpp"

namespace hapss::mc {

using geometry::StreamKey;

enum class Scenario {
    hap_omni,
    hap_dir,
    bs_omni,
    bs_dir,
    hap_fluct_omni,
    hap_fluct_dir,
    hap_plane_baseline,
};

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::hap_omni: return "hap_omni";
        case Scenario::hap_dir: return "hap_dir";
        case Scenario::bs_omni: return "bs_omni";
        case Scenario::bs_dir: return "bs_dir";
        case Scenario::hap_fluct_omni: return "hap_fluct_omni";
        case Scenario::hap_fluct_dir: return "hap_fluct_dir";
        default: return "hap_plane_baseline";
    }
}

inline bool is_bs_scenario(Scenario s) {
    return s == Scenario::bs_omni || s == Scenario::bs_dir;
}
inline bool is_directional(Scenario s) {
    return s == Scenario::hap_dir || s == Scenario::bs_dir ||
           s == Scenario::hap_fluct_dir;
}
inline bool is_fluct(Scenario s) {
    return s == Scenario::hap_fluct_omni || s == Scenario::hap_fluct_dir;
}

struct TrialOutcome {
    std::optional<double> sinr_hap_user;
    std::optional<double> sinr_bs_user;
    std::size_t n_haps = 0;
    std::size_t n_bss = 0;
};

struct CoverageEstimate {
    double p_hat = 0.0;
    double ci95_halfwidth = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
};

/// Truncation of the plane-baseline HAP field. For alpha_h > 2 the radius
/// keeps the neglected mean interference below 0.1% of the total (power-law
/// tail); for alpha_h <= 2 the tail integral diverges and the field is cut
/// at sqrt(1000) times the cap's maximum slant range instead, which the
/// metadata flags as an unbounded-tail truncation.
struct PlaneTruncation {
    double radius = 0.0;
    bool tail_bounded = false;
    double tail_fraction = 1e-3;
};

inline PlaneTruncation plane_truncation(const NetworkConfig& cfg) {
    PlaneTruncation tr;
    const double h = cfg.hap_height;
    const double alpha = cfg.hap_pathloss;
    if (alpha > 2.0 + 1e-9) {
        tr.tail_bounded = true;
        tr.radius = h * std::sqrt(std::pow(1e3, 2.0 / (alpha - 2.0)) - 1.0);
    } else {
        tr.tail_bounded = false;
        const double slant = std::sqrt(2.0 * cfg.earth_radius * h + h * h);
        tr.radius = std::sqrt(1000.0) * slant;
    }
    return tr;
}

namespace detail {

struct TrialContext {
    // cached per (cfg, scenario); shared across trials read-only
    geometry::SphericalCapSpec cap;
    geometry::ShellSpec shell;
    antenna::AntennaPattern pattern{};
    bool directional = false;
    double serving_gain = 1.0;
    double plane_radius = 0.0;
};

inline TrialContext make_context(const NetworkConfig& cfg, Scenario sc) {
    TrialContext ctx;
    ctx.cap = cfg.cap();
    if (is_fluct(sc)) {
        if (!(cfg.height_fluctuation > 0.0))
            throw capability_error("fluctuation scenarios need delta_h > 0");
        ctx.shell = cfg.shell();
    }
    ctx.directional = is_directional(sc);
    if (ctx.directional) {
        ctx.pattern = cfg.antenna.pattern();
        ctx.serving_gain = ctx.pattern.peak_gain();
    }
    if (sc == Scenario::hap_plane_baseline) ctx.plane_radius = plane_truncation(cfg).radius;
    return ctx;
}

}  // namespace detail

/// One network realization. The serving node is never part of the sampled
/// interferer field: the HAP user's server is an extra node at the zenith
/// (distance x0), the BS user's server an extra node at distance y0.
inline TrialOutcome run_trial(const NetworkConfig& cfg, Scenario scenario,
                              StreamKey trial_key,
                              const detail::TrialContext& ctx) {
    const double a = cfg.earth_radius;
    const double b = ctx.cap.sphere_radius;
    const double alpha_h = cfg.hap_pathloss;
    const double alpha_g = cfg.bs_pathloss;
    const int m = cfg.nakagami_m;
    const int ni = cfg.montecarlo.n_intervals;

    auto hap_fading = trial_key.child(3).open();
    auto bs_fading = trial_key.child(4).open();
    auto serving = trial_key.child(5).open();

    TrialOutcome out;
    double hap_interf = 0.0;  // sum P_h [G] d^-alpha h_i at the typical user
    std::size_t n_haps = 0;

    auto add_hap = [&](double r, double th) {
        const double d = geometry::distance_to_typical_user(r, th, a);
        double g = 1.0;
        if (ctx.directional) g = ctx.pattern.gain(antenna::offaxis_angle(th, a, r));
        const double fade = channels::sample_nakagami_power(m, hap_fading);
        hap_interf += cfg.hap_tx_power * g * std::pow(d, -alpha_h) * fade;
        ++n_haps;
    };

    switch (scenario) {
        case Scenario::hap_fluct_omni:
        case Scenario::hap_fluct_dir:
            geometry::detail::sample_shell_cells(
                ctx.shell, cfg.hap_density, trial_key.child(1), ni,
                [&](double r, double th, double) { add_hap(r, th); });
            break;
        case Scenario::hap_plane_baseline:
            geometry::detail::sample_disk(
                cfg.hap_density, ctx.plane_radius, trial_key.child(1),
                [&](double rho, double) {
                    const double d = std::sqrt(rho * rho + cfg.hap_height * cfg.hap_height);
                    const double fade = channels::sample_nakagami_power(m, hap_fading);
                    hap_interf += cfg.hap_tx_power * std::pow(d, -alpha_h) * fade;
                    ++n_haps;
                });
            break;
        default:
            geometry::detail::sample_cap_cells(
                ctx.cap, cfg.hap_density, trial_key.child(1), ni,
                [&](double th, double) { add_hap(b, th); });
            break;
    }

    double bs_interf = 0.0;  // sum P_g y^-alpha g_j at the typical user
    std::size_t n_bss = 0;
    geometry::detail::sample_disk(
        cfg.bs_density, cfg.bs_field_radius, trial_key.child(2),
        [&](double y, double) {
            const double fade = channels::sample_rayleigh_power(cfg.rayleigh_scale, bs_fading);
            bs_interf += cfg.bs_tx_power * std::pow(y, -alpha_g) * fade;
            ++n_bss;
        });

    out.n_haps = n_haps;
    out.n_bss = n_bss;

    const double denom = cfg.noise_power + hap_interf + bs_interf;
    if (is_bs_scenario(scenario)) {
        const double g0 = channels::sample_rayleigh_power(cfg.rayleigh_scale, serving);
        out.sinr_bs_user = cfg.bs_tx_power *
                           std::pow(cfg.bs_link_distance, -alpha_g) * g0 / denom;
    } else {
        double x0 = cfg.serving_distance();
        if (is_fluct(scenario)) {
            const double r0 = serving.uniform(b - cfg.height_fluctuation,
                                              b + cfg.height_fluctuation);
            x0 = r0 - a;
        }
        const double h0 = channels::sample_nakagami_power(m, serving);
        out.sinr_hap_user = cfg.hap_tx_power * ctx.serving_gain *
                            std::pow(x0, -alpha_h) * h0 / denom;
    }
    return out;
}

inline TrialOutcome run_trial(const NetworkConfig& cfg, Scenario scenario,
                              StreamKey trial_key) {
    cfg.validate();
    return run_trial(cfg, scenario, trial_key, detail::make_context(cfg, scenario));
}

namespace detail {

inline double ci95(double p, double n) {
    // Wilson interval when the normal approximation is thin
    if (p * (1.0 - p) * n < 10.0) {
        const double z = 1.959963984540054;
        const double z2n = z * z / n;
        return z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
    }
    return 1.959963984540054 * std::sqrt(p * (1.0 - p) / n);
}

}  // namespace detail

/// Fraction of trials with SINR above eps, with a binomial 95% interval.
/// Deterministic in (cfg, scenario, eps, n_trials, seed) for any thread count.
inline CoverageEstimate estimate_coverage(const NetworkConfig& cfg, Scenario scenario,
                                          double eps, std::uint64_t n_trials,
                                          std::uint64_t seed, int threads = 0) {
    cfg.validate();
    if (n_trials < 1) throw std::domain_error("n_trials must be >= 1");
    const auto ctx = detail::make_context(cfg, scenario);
    const StreamKey root{seed, 0};
    const bool bs_side = is_bs_scenario(scenario);

    auto counts = par::map_chunks<std::uint64_t>(
        n_trials, 256, threads,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            std::uint64_t hits = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                const auto o = run_trial(cfg, scenario, root.child(i), ctx);
                const double sinr = bs_side ? *o.sinr_bs_user : *o.sinr_hap_user;
                if (sinr > eps) ++hits;
            }
            return hits;
        });

    std::uint64_t hits = 0;
    for (auto c : counts) hits += c;

    CoverageEstimate est;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(n_trials);
    est.ci95_halfwidth = detail::ci95(est.p_hat, static_cast<double>(n_trials));
    est.n_trials = n_trials;
    est.seed = seed;
    return est;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepAxis { height, density, epsilon, delta_h, theta_3db };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::height: return "height";
        case SweepAxis::density: return "density";
        case SweepAxis::epsilon: return "epsilon";
        case SweepAxis::delta_h: return "delta_h";
        default: return "theta_3db";
    }
}

inline NetworkConfig apply_axis(NetworkConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::height: cfg.hap_height = value; break;
        case SweepAxis::density: cfg.hap_density = value; break;
        case SweepAxis::epsilon: cfg.sinr_threshold = value; break;
        case SweepAxis::delta_h: cfg.height_fluctuation = value; break;
        case SweepAxis::theta_3db: cfg.antenna.theta_3db_deg = value; break;
    }
    cfg.validate();
    return cfg;
}

struct SweepRow {
    double axis_value = 0.0;
    CoverageEstimate estimate;
};

/// One estimate per grid point. All points reuse the same master seed
/// (common random numbers), which sharpens trend comparisons along the axis.
inline std::vector<SweepRow> sweep(const NetworkConfig& cfg, Scenario scenario,
                                   SweepAxis axis, const std::vector<double>& grid,
                                   std::uint64_t n_trials, std::uint64_t seed,
                                   int threads = 0) {
    if (grid.empty()) throw std::domain_error("sweep grid must be nonempty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::domain_error("sweep grid must be ascending");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double v : grid) {
        const NetworkConfig c = apply_axis(cfg, axis, v);
        SweepRow row;
        row.axis_value = v;
        row.estimate = estimate_coverage(c, scenario, c.sinr_threshold, n_trials,
                                         seed, threads);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Laplace-functional oracle
// ---------------------------------------------------------------------------

/// Interference sums whose Laplace functionals cross-validate the quadrature
/// path (same normalizations as the analytic transforms).
enum class InterferenceTerm { Ih1, Ig1, Ih2, Ig2, Ih3, Ih4 };

inline const char* term_name(InterferenceTerm t) {
    switch (t) {
        case InterferenceTerm::Ih1: return "Ih1";
        case InterferenceTerm::Ig1: return "Ig1";
        case InterferenceTerm::Ih2: return "Ih2";
        case InterferenceTerm::Ig2: return "Ig2";
        case InterferenceTerm::Ih3: return "Ih3";
        default: return "Ih4";
    }
}

/// Empirical E[exp(-s I)] over independent field realizations.
inline double laplace_functional_mc(const NetworkConfig& cfg, InterferenceTerm term,
                                    double s, std::uint64_t n_realizations,
                                    std::uint64_t seed, int threads = 0) {
    cfg.validate();
    const auto cap = cfg.cap();
    const double a = cfg.earth_radius;
    const double b = cap.sphere_radius;
    const int m = cfg.nakagami_m;
    const int ni = cfg.montecarlo.n_intervals;

    const bool bs_term = term == InterferenceTerm::Ig1 || term == InterferenceTerm::Ig2;
    const bool gain_term = term == InterferenceTerm::Ih3 || term == InterferenceTerm::Ih4;
    antenna::AntennaPattern pattern{};
    double gain_norm = 1.0;
    if (gain_term) {
        pattern = cfg.antenna.pattern();
        if (term == InterferenceTerm::Ih3) gain_norm = pattern.peak_gain();
    }
    double scale = 1.0;
    if (term == InterferenceTerm::Ig1) scale = cfg.bs_tx_power / cfg.hap_tx_power;
    if (term == InterferenceTerm::Ih2 || term == InterferenceTerm::Ih4)
        scale = cfg.hap_tx_power / cfg.bs_tx_power;

    const StreamKey root{seed, 0};
    auto sums = par::map_chunks<double>(
        n_realizations, 256, threads,
        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            double acc = 0.0;
            for (std::uint64_t i = begin; i < end; ++i) {
                const auto key = root.child(i);
                auto fading = key.child(3).open();
                double interf = 0.0;
                if (bs_term) {
                    geometry::detail::sample_disk(
                        cfg.bs_density, cfg.bs_field_radius, key.child(2),
                        [&](double y, double) {
                            const double fade =
                                channels::sample_rayleigh_power(cfg.rayleigh_scale, fading);
                            interf += scale * std::pow(y, -cfg.bs_pathloss) * fade;
                        });
                } else {
                    geometry::detail::sample_cap_cells(
                        cap, cfg.hap_density, key.child(1), ni, [&](double th, double) {
                            const double d = geometry::distance_to_typical_user(b, th, a);
                            double g = 1.0;
                            if (gain_term)
                                g = pattern.gain(antenna::offaxis_angle(th, a, b)) / gain_norm;
                            const double fade = channels::sample_nakagami_power(m, fading);
                            interf += scale * g * std::pow(d, -cfg.hap_pathloss) * fade;
                        });
                }
                acc += std::exp(-s * interf);
            }
            return acc;
        });

    double total = 0.0;
    for (double v : sums) total += v;
    return total / static_cast<double>(n_realizations);
}

}  // namespace hapss::mc
