#pragma once

// Adaptive Gauss-Kronrod (G7-K15) integration on a finite interval.
// Segments are refined worst-first until the summed error estimate drops
// below max(abs_tol, rel_tol * |integral|).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hapss/errors.hpp"

namespace hapss::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_segments = 2000;
    bool throw_on_failure = true;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // summed per-segment estimate
    bool converged = false;
};

namespace detail {

// K15 nodes (positive half) with Gauss-7 and Kronrod-15 weights.
inline constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double kGauss[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double kKronrod[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

template <class F>
void g7k15(const F& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kGauss[0] * f0;
    double k15 = kKronrod[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double fs = f(mid + dx) + f(mid - dx);
        g7 += kGauss[i] * fs;
        k15 += kKronrod[i] * fs;
    }
    g7 *= half;
    k15 *= half;
    value = k15;
    const double diff = 200.0 * std::fabs(k15 - g7);
    error = std::max(diff * std::sqrt(diff), 50.0 * 1e-16 * std::fabs(k15));
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Integrate f over [a,b]. On non-convergence either throws numerical_error
/// (default) or returns with converged=false.
template <class F>
Result integrate(const F& f, double a, double b, const Options& opt = {}) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    std::vector<detail::Segment> heap;
    heap.reserve(64);
    detail::Segment s0{a, b, 0.0, 0.0};
    detail::g7k15(f, a, b, s0.value, s0.error);
    heap.push_back(s0);

    double total = s0.value;
    double toterr = s0.error;
    int splits = 0;
    while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_segments) break;
        std::pop_heap(heap.begin(), heap.end());
        const detail::Segment worst = heap.back();
        heap.pop_back();
        total -= worst.value;
        toterr -= worst.error;

        const double mid = 0.5 * (worst.a + worst.b);
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        detail::g7k15(f, left.a, left.b, left.value, left.error);
        detail::g7k15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value;
        toterr += left.error + right.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        ++splits;
    }

    res.value = total;
    res.error = toterr;
    res.converged = toterr <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    if (!res.converged && opt.throw_on_failure) {
        throw numerical_error("quadrature did not converge", toterr);
    }
    return res;
}

/// Integrate over [a,b] split at interior breakpoints (integrand kinks or
/// jumps). Breakpoints outside (a,b) are ignored.
template <class F>
Result integrate_split(const F& f, double a, double b,
                       const std::vector<double>& breaks, const Options& opt = {}) {
    std::vector<double> edges{a};
    for (double x : breaks) {
        if (x > a && x < b) edges.push_back(x);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    Result total;
    total.converged = true;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Result r = integrate(f, edges[i], edges[i + 1], opt);
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    }
    return total;
}

}  // namespace hapss::quad
