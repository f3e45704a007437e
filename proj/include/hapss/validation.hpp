#pragma once

// Analytic-vs-Monte-Carlo cross checks. The quadrature path and the sampler
// path share no interference code, so agreement within the stated bands
// validates both. Used by the `validate` CLI command and the acceptance
// suite.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hapss/analytic.hpp"
#include "hapss/config.hpp"
#include "hapss/montecarlo.hpp"

namespace hapss::validation {

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // |difference| (absolute or relative, per check)
    double tolerance = 0.0;
    std::string detail;
};

namespace detail {

inline Check versus_mc(const std::string& name, double analytic,
                       const mc::CoverageEstimate& est) {
    Check c;
    c.name = name;
    c.measured = std::fabs(analytic - est.p_hat);
    c.tolerance = std::max(0.02, 3.0 * est.ci95_halfwidth);
    c.pass = c.measured <= c.tolerance;
    c.detail = "analytic=" + std::to_string(analytic) +
               " mc=" + std::to_string(est.p_hat) +
               " ci95=" + std::to_string(est.ci95_halfwidth);
    return c;
}

}  // namespace detail

/// Coverage agreement |analytic - MC| <= max(0.02, 3 CI) for the HAP user
/// (both antenna modes), the BS user (both modes), and, when delta_h > 0,
/// the fluctuation variants.
inline std::vector<Check> coverage_cross_checks(NetworkConfig cfg,
                                                std::uint64_t trials,
                                                std::uint64_t seed,
                                                int threads = 0) {
    cfg.validate();
    std::vector<Check> out;
    const double eps = cfg.sinr_threshold;

    for (bool dir : {false, true}) {
        NetworkConfig c = cfg;
        c.antenna.directional = dir;
        const std::string tag = dir ? "dir" : "omni";

        const auto hap = dir ? analytic::coverage_hap_directional_approx(c)
                             : analytic::coverage_hap_approx(c);
        const auto hap_mc = mc::estimate_coverage(
            c, dir ? mc::Scenario::hap_dir : mc::Scenario::hap_omni, eps, trials,
            seed, threads);
        out.push_back(detail::versus_mc("hap_approx_vs_mc_" + tag, hap.value, hap_mc));

        if (c.nakagami_m <= 2) {
            const auto ex = dir ? analytic::coverage_hap_directional_exact(c)
                                : analytic::coverage_hap_exact(c);
            out.push_back(detail::versus_mc("hap_exact_vs_mc_" + tag, ex.value, hap_mc));
            Check gap;
            gap.name = "hap_exact_vs_approx_" + tag;
            gap.measured = std::fabs(ex.value - hap.value);
            gap.tolerance = 0.05;
            gap.pass = gap.measured <= gap.tolerance;
            gap.detail = "exact=" + std::to_string(ex.value) +
                         " approx=" + std::to_string(hap.value);
            out.push_back(gap);
        }

        const auto terr = dir ? analytic::coverage_terrestrial_directional(c)
                              : analytic::coverage_terrestrial(c);
        const auto terr_mc = mc::estimate_coverage(
            c, dir ? mc::Scenario::bs_dir : mc::Scenario::bs_omni, eps, trials,
            seed, threads);
        out.push_back(detail::versus_mc("terrestrial_vs_mc_" + tag, terr.value, terr_mc));

        if (cfg.height_fluctuation > 0.0) {
            const auto fl = dir ? analytic::coverage_hap_directional_fluct(c)
                                : analytic::coverage_hap_fluct(c);
            const auto fl_mc = mc::estimate_coverage(
                c, dir ? mc::Scenario::hap_fluct_dir : mc::Scenario::hap_fluct_omni,
                eps, trials, seed, threads);
            out.push_back(detail::versus_mc("hap_fluct_vs_mc_" + tag, fl.value, fl_mc));
        }
    }
    return out;
}

/// Laplace-functional oracle: empirical E[exp(-s I)] against the quadrature
/// transform, +/-1% relative, at the theorem evaluation points.
inline std::vector<Check> laplace_cross_checks(NetworkConfig cfg,
                                               std::uint64_t realizations,
                                               std::uint64_t seed,
                                               int threads = 0) {
    cfg.validate();
    std::vector<Check> out;
    const double x0 = cfg.serving_distance();
    const double s_hap =
        cfg.nakagami_m * cfg.sinr_threshold * std::pow(x0, cfg.hap_pathloss);
    const double s_terr = cfg.sinr_threshold *
                          std::pow(cfg.bs_link_distance, cfg.bs_pathloss) /
                          (2.0 * cfg.rayleigh_scale);

    NetworkConfig dir_cfg = cfg;
    dir_cfg.antenna.directional = true;

    struct Term {
        const char* name;
        double s;
        double analytic;
        mc::InterferenceTerm term;
        const NetworkConfig* cfg;
    };
    const Term terms[] = {
        {"laplace_Ih1", s_hap, analytic::laplace_Ih1(s_hap, cfg), mc::InterferenceTerm::Ih1, &cfg},
        {"laplace_Ig1", s_hap, analytic::laplace_Ig1(s_hap, cfg), mc::InterferenceTerm::Ig1, &cfg},
        {"laplace_Ih2", s_terr, analytic::laplace_Ih2(s_terr, cfg), mc::InterferenceTerm::Ih2, &cfg},
        {"laplace_Ih3", s_hap, analytic::laplace_Ih3(s_hap, dir_cfg), mc::InterferenceTerm::Ih3, &dir_cfg},
        {"laplace_Ih4", s_terr, analytic::laplace_Ih4(s_terr, dir_cfg), mc::InterferenceTerm::Ih4, &dir_cfg},
    };
    for (const auto& t : terms) {
        const double emp =
            mc::laplace_functional_mc(*t.cfg, t.term, t.s, realizations, seed, threads);
        Check c;
        c.name = t.name;
        c.measured = std::fabs(emp - t.analytic) / t.analytic;
        c.tolerance = 0.01;
        c.pass = c.measured <= c.tolerance;
        c.detail = "quad=" + std::to_string(t.analytic) + " mc=" + std::to_string(emp);
        out.push_back(c);
    }
    return out;
}

/// Structural identities: unit-gain directional == omni (1e-10), shell with
/// dh -> 0 == cap (1e-4), analytic Laplace derivative == central difference
/// (1e-5 relative).
inline std::vector<Check> reduction_checks(NetworkConfig cfg) {
    cfg.validate();
    std::vector<Check> out;

    {
        NetworkConfig omni = cfg;
        omni.antenna.directional = false;
        const double d = std::fabs(analytic::coverage_hap_directional_approx(omni).value -
                                   analytic::coverage_hap_approx(omni).value);
        Check c{"unit_gain_reduction", d <= 1e-10, d, 1e-10,
                "directional pipeline with unit gain vs omni"};
        out.push_back(c);
        if (omni.nakagami_m <= 2) {
            const double e = std::fabs(analytic::coverage_hap_directional_exact(omni).value -
                                       analytic::coverage_hap_exact(omni).value);
            out.push_back({"unit_gain_reduction_exact", e <= 1e-10, e, 1e-10, ""});
        }
        const double t = std::fabs(analytic::coverage_terrestrial_directional(omni).value -
                                   analytic::coverage_terrestrial(omni).value);
        out.push_back({"unit_gain_reduction_terrestrial", t <= 1e-10, t, 1e-10, ""});
    }

    {
        NetworkConfig tiny = cfg;
        tiny.height_fluctuation = 1.0;  // 1 m shell
        const double d = std::fabs(analytic::coverage_hap_fluct(tiny).value -
                                   analytic::coverage_hap_approx(tiny).value);
        out.push_back({"shell_collapse", d <= 1e-4, d, 1e-4,
                       "delta_h -> 0 limit vs no-fluctuation coverage"});
    }

    {
        const double x0 = cfg.serving_distance();
        const double s =
            cfg.nakagami_m * cfg.sinr_threshold * std::pow(x0, cfg.hap_pathloss);
        const double ds = 1e-5 * s;
        const double fd =
            (analytic::laplace_Ih1(s + ds, cfg) - analytic::laplace_Ih1(s - ds, cfg)) /
            (2.0 * ds);
        const double an = analytic::laplace_Ih1_deriv(s, cfg, 1);
        const double rel = std::fabs(an - fd) / std::fabs(an);
        out.push_back({"laplace_derivative_fd", rel <= 1e-5, rel, 1e-5,
                       "analytic=" + std::to_string(an) + " fd=" + std::to_string(fd)});
    }
    return out;
}

}  // namespace hapss::validation
