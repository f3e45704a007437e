#pragma once

// Small-scale fading models. Air-to-ground links use Nakagami-m whose power
// gain is Gamma(m, 1/m) with unit mean (integer m only); ground-to-ground
// links use Rayleigh whose power gain is exponential with mean 2 sigma^2.
// Both variables multiply the path loss directly in the SINR.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "hapss/errors.hpp"
#include "hapss/rng.hpp"

namespace hapss::channels {

struct NakagamiParams {
    int m = 1;

    static NakagamiParams with_shape(int m) {
        if (m < 1)
            throw capability_error(
                "Nakagami shape must be a positive integer; non-integer m is out of scope");
        return NakagamiParams{m};
    }
};

struct RayleighParams {
    double sigma_sq = 0.5;

    static RayleighParams with_scale(double sigma_sq) {
        if (!(sigma_sq > 0.0)) throw std::domain_error("sigma^2 must be positive");
        return RayleighParams{sigma_sq};
    }
};

/// Pr{h > x} = Gamma(m, m x)/Gamma(m) = e^{-mx} sum_{k<m} (mx)^k / k!.
inline double nakagami_power_ccdf(double x, int m) {
    if (x < 0.0) throw std::domain_error("nakagami_power_ccdf: x must be >= 0");
    if (m < 1) throw capability_error("Nakagami shape must be a positive integer");
    const double mx = m * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= mx / k;
        sum += term;
    }
    return std::exp(-mx) * sum;
}

/// Unit-mean Nakagami-m power gain: (1/m) * sum of m unit exponentials.
inline double sample_nakagami_power(int m, rng::RandomStream& rs) {
    if (m < 1) throw capability_error("Nakagami shape must be a positive integer");
    return rs.gamma_int_sum(m) / m;
}

/// Pr{g > x} = exp(-x / (2 sigma^2)).
inline double rayleigh_power_ccdf(double x, double sigma_sq) {
    if (x < 0.0) throw std::domain_error("rayleigh_power_ccdf: x must be >= 0");
    if (!(sigma_sq > 0.0)) throw std::domain_error("sigma^2 must be positive");
    return std::exp(-x / (2.0 * sigma_sq));
}

/// Rayleigh power gain: exponential with mean 2 sigma^2.
inline double sample_rayleigh_power(double sigma_sq, rng::RandomStream& rs) {
    if (!(sigma_sq > 0.0)) throw std::domain_error("sigma^2 must be positive");
    return rs.exponential(2.0 * sigma_sq);
}

/// (eta1, eta2) of the incomplete-gamma bounds: eta1 = 1 and
/// eta2 = (m!)^{-1/m} for integer m >= 1. The approximate coverage theorem
/// evaluates its Laplace transforms at s scaled by eta2.
inline std::pair<double, double> lemma1_eta(int m) {
    if (m < 1) throw capability_error("Nakagami shape must be a positive integer");
    double log_fact = 0.0;
    for (int k = 2; k <= m; ++k) log_fact += std::log(static_cast<double>(k));
    return {1.0, std::exp(-log_fact / m)};
}

}  // namespace hapss::channels
