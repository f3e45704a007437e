#pragma once

// Point processes on curves, surfaces and manifolds.
//
// A PPP on a parametric manifold is sampled by converting it to a
// non-homogeneous PPP on the flat parameter domain with the equivalent
// density lambda * sqrt(det Q), Q the Gram matrix of the chart partials,
// then thinning a homogeneous dominating PPP cell by cell. The spherical
// cap and shell used by the network model get dedicated samplers whose
// per-cell dominating density is an exact bound (the equivalent density is
// increasing in theta and r there); the generic sampler bounds an arbitrary
// density by probing a 3^n grid per cell and inflating by 5%.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hapss/errors.hpp"
#include "hapss/rng.hpp"

namespace hapss::geometry {

inline constexpr double kPi = 3.14159265358979323846;

/// User-supplied chart f: R^n -> R^{n+1} on an axis-aligned box.
struct ParametricManifold {
    int dimension = 1;
    std::vector<std::array<double, 2>> domain;  // per-axis [min, max]
    std::function<std::vector<double>(const std::vector<double>&)> map;

    void validate() const {
        if (dimension < 1) throw std::domain_error("manifold dimension must be >= 1");
        if (static_cast<int>(domain.size()) != dimension)
            throw std::domain_error("domain box rank does not match dimension");
        for (const auto& ax : domain) {
            if (!(std::isfinite(ax[0]) && std::isfinite(ax[1]) && ax[0] < ax[1]))
                throw std::domain_error("domain bounds must be finite with min < max");
        }
        if (!map) throw std::domain_error("manifold map is empty");
    }

    bool contains(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != dimension) return false;
        for (int i = 0; i < dimension; ++i) {
            if (x[i] < domain[i][0] || x[i] > domain[i][1]) return false;
        }
        return true;
    }

    double axis_width(int i) const { return domain[i][1] - domain[i][0]; }
};

/// Spherical-cap geometry of the HAP sphere seen from the typical user.
struct SphericalCapSpec {
    double earth_radius;     // a
    double hap_height;       // h
    double sphere_radius;    // b = a + h
    double max_polar_angle;  // t = arccos(a/b)

    static SphericalCapSpec from_heights(double a, double h) {
        if (!(a > 0.0) || !(h > 0.0))
            throw std::domain_error("earth radius and HAP height must be positive");
        SphericalCapSpec c;
        c.earth_radius = a;
        c.hap_height = h;
        c.sphere_radius = a + h;
        c.max_polar_angle = std::acos(a / (a + h));
        return c;
    }

    /// Cap area b^2 * 2pi * (1 - cos t); mean point count is density * area.
    double area() const {
        return 2.0 * kPi * sphere_radius * sphere_radius *
               (1.0 - std::cos(max_polar_angle));
    }
};

/// Radial shell [b - dh, b + dh] over the cap's angular extent.
struct ShellSpec {
    SphericalCapSpec cap;
    double delta_h = 0.0;

    static ShellSpec around(const SphericalCapSpec& cap, double delta_h) {
        if (delta_h < 0.0 || delta_h >= cap.hap_height)
            throw std::domain_error("shell half-thickness must satisfy 0 <= delta_h < h");
        return ShellSpec{cap, delta_h};
    }
};

enum class Tier { HAP, BS };

struct PointRecord {
    std::array<double, 3> params{};     // (theta,phi), (r,theta,phi) or (radius,azimuth)
    int n_params = 0;
    std::array<double, 3> cartesian{};  // meters
};

struct PointSet {
    Tier tier = Tier::HAP;
    std::vector<PointRecord> points;
};

/// LoS limit t = arccos(a/(a+h)).
inline double max_polar_angle(double a, double h) {
    if (!(a > 0.0) || !(h > 0.0))
        throw std::domain_error("max_polar_angle: a and h must be positive");
    return std::acos(a / (a + h));
}

/// Distance from a point at spherical (r, theta, .) to the user at (0,0,a).
/// Uses (r-a)^2 + 4 a r sin^2(theta/2), stable near theta = 0.
inline double distance_to_typical_user(double r, double theta, double a) {
    if (r < a) throw std::domain_error("distance_to_typical_user: r must be >= a");
    if (theta < 0.0 || theta > kPi)
        throw std::domain_error("distance_to_typical_user: theta outside [0, pi]");
    const double s = std::sin(0.5 * theta);
    return std::sqrt((r - a) * (r - a) + 4.0 * a * r * s * s);
}

// ---------------------------------------------------------------------------
// Equivalent densities (finite-difference metric terms)
// ---------------------------------------------------------------------------

namespace detail {

// Relative FD step: 1e-6 of the axis width, central differences.
inline double fd_step(const ParametricManifold& m, int axis) {
    return 1e-6 * m.axis_width(axis);
}

inline std::vector<double> partial(const ParametricManifold& m,
                                   const std::vector<double>& x, int axis) {
    const double hstep = fd_step(m, axis);
    std::vector<double> xp = x, xm = x;
    xp[axis] += hstep;
    xm[axis] -= hstep;
    const auto fp = m.map(xp);
    const auto fm = m.map(xm);
    if (fp.size() != fm.size())
        throw std::domain_error("manifold map returned inconsistent dimensions");
    std::vector<double> d(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) d[i] = (fp[i] - fm[i]) / (2.0 * hstep);
    return d;
}

inline double dot(const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

// Determinant by Gaussian elimination with partial pivoting (n is tiny).
inline double det(std::vector<std::vector<double>> q) {
    const int n = static_cast<int>(q.size());
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(q[row][col]) > std::fabs(q[piv][col])) piv = row;
        if (piv != col) {
            std::swap(q[piv], q[col]);
            d = -d;
        }
        if (q[col][col] == 0.0) return 0.0;
        d *= q[col][col];
        for (int row = col + 1; row < n; ++row) {
            const double f = q[row][col] / q[col][col];
            for (int k = col; k < n; ++k) q[row][k] -= f * q[col][k];
        }
    }
    return d;
}

}  // namespace detail

/// sqrt(det Q) at x, Q_ij = <df/dx_i, df/dx_j>. The Jacobian factor that
/// converts ambient density to parameter-space density.
inline double metric_factor(const ParametricManifold& m, const std::vector<double>& x) {
    m.validate();
    if (!m.contains(x)) throw std::domain_error("parameter outside manifold domain");
    std::vector<std::vector<double>> partials;
    partials.reserve(m.dimension);
    for (int i = 0; i < m.dimension; ++i) partials.push_back(detail::partial(m, x, i));
    std::vector<std::vector<double>> q(m.dimension, std::vector<double>(m.dimension));
    for (int i = 0; i < m.dimension; ++i)
        for (int j = 0; j < m.dimension; ++j)
            q[i][j] = detail::dot(partials[i], partials[j]);
    const double d = detail::det(q);
    if (!(d > 0.0))
        throw degenerate_parametrization_error(
            "metric determinant not positive at probe point (det = " + std::to_string(d) + ")");
    return std::sqrt(d);
}

/// lambda(t) * ||r'(t)|| for a curve chart (n = 1).
inline double equivalent_density_curve(const ParametricManifold& curve,
                                       const std::function<double(double)>& density,
                                       double t) {
    if (curve.dimension != 1) throw std::domain_error("curve chart must have n = 1");
    return density(t) * metric_factor(curve, {t});
}

/// lambda(u,v) * sqrt(EG - F^2) for a surface chart (n = 2).
inline double equivalent_density_surface(
    const ParametricManifold& surface,
    const std::function<double(double, double)>& density, double u, double v) {
    if (surface.dimension != 2) throw std::domain_error("surface chart must have n = 2");
    return density(u, v) * metric_factor(surface, {u, v});
}

/// lambda(x) * sqrt(det Q) for a general chart.
inline double equivalent_density_manifold(
    const ParametricManifold& mfd,
    const std::function<double(const std::vector<double>&)>& density,
    const std::vector<double>& x) {
    return density(x) * metric_factor(mfd, x);
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// (seed, stream) pair naming one random stream; cells and trials get
/// children via rng::derive_stream.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    StreamKey child(std::uint64_t index) const {
        return StreamKey{seed, rng::derive_stream(stream, index)};
    }
    rng::RandomStream open() const { return rng::RandomStream(seed, stream); }
};

namespace detail {

// Cell-partitioned thinning over [0,t]x[0,2pi). The dominating density of
// cell (i,j) is taken at the upper theta edge; sin is increasing on [0,t],
// t < pi/2, so that is an exact bound and retention sin(th)/sin(th_hi) <= 1.
template <class Emit>
void sample_cap_cells(const SphericalCapSpec& cap, double lambda, StreamKey key,
                      int n_intervals, Emit&& emit) {
    if (lambda < 0.0) throw std::domain_error("density must be >= 0");
    if (n_intervals < 1) throw std::domain_error("n_intervals must be >= 1");
    if (lambda == 0.0) return;
    const double t = cap.max_polar_angle;
    const double b2 = cap.sphere_radius * cap.sphere_radius;
    const double dth = t / n_intervals;
    const double dph = 2.0 * kPi / n_intervals;
    for (int i = 0; i < n_intervals; ++i) {
        const double th_lo = i * dth;
        const double th_hi = (i + 1 == n_intervals) ? t : (i + 1) * dth;
        const double sin_hi = std::sin(th_hi);
        const double lam_max = lambda * b2 * sin_hi;
        for (int j = 0; j < n_intervals; ++j) {
            auto rs = key.child(static_cast<std::uint64_t>(i) * n_intervals + j).open();
            const std::uint64_t n = rs.poisson(lam_max * dth * dph);
            for (std::uint64_t k = 0; k < n; ++k) {
                const double th = rs.uniform(th_lo, th_hi);
                const double ph = rs.uniform(j * dph, (j + 1) * dph);
                const double keep = std::sin(th) / sin_hi;
                if (rs.uniform01() < keep) emit(th, ph);
            }
        }
    }
}

template <class Emit>
void sample_shell_cells(const ShellSpec& shell, double lambda, StreamKey key,
                        int n_intervals, Emit&& emit) {
    if (lambda < 0.0) throw std::domain_error("density must be >= 0");
    if (n_intervals < 1) throw std::domain_error("n_intervals must be >= 1");
    if (lambda == 0.0) return;
    const auto& cap = shell.cap;
    const double dh = shell.delta_h;
    if (dh == 0.0) {  // degenerate shell: all mass on the cap surface
        sample_cap_cells(cap, lambda, key, n_intervals,
                         [&](double th, double ph) { emit(cap.sphere_radius, th, ph); });
        return;
    }
    const double t = cap.max_polar_angle;
    const double r_lo = cap.sphere_radius - dh;
    const double r_hi = cap.sphere_radius + dh;
    const double lam_vol = lambda / (2.0 * dh);
    const double dth = t / n_intervals;
    const double dph = 2.0 * kPi / n_intervals;
    // equivalent density lam_vol * r^2 sin(theta): increasing in both r and
    // theta, so the cell bound sits at (r_hi, th_hi).
    for (int i = 0; i < n_intervals; ++i) {
        const double th_lo = i * dth;
        const double th_hi = (i + 1 == n_intervals) ? t : (i + 1) * dth;
        const double peak = r_hi * r_hi * std::sin(th_hi);
        const double lam_max = lam_vol * peak;
        for (int j = 0; j < n_intervals; ++j) {
            auto rs = key.child(static_cast<std::uint64_t>(i) * n_intervals + j).open();
            const std::uint64_t n = rs.poisson(lam_max * dth * dph * 2.0 * dh);
            for (std::uint64_t k = 0; k < n; ++k) {
                const double r = rs.uniform(r_lo, r_hi);
                const double th = rs.uniform(th_lo, th_hi);
                const double ph = rs.uniform(j * dph, (j + 1) * dph);
                const double keep = (r * r * std::sin(th)) / peak;
                if (rs.uniform01() < keep) emit(r, th, ph);
            }
        }
    }
}

template <class Emit>
void sample_disk(double lambda, double radius, StreamKey key, Emit&& emit) {
    if (lambda < 0.0) throw std::domain_error("density must be >= 0");
    if (!(radius > 0.0)) throw std::domain_error("disk radius must be positive");
    if (lambda == 0.0) return;
    auto rs = key.open();
    const std::uint64_t n = rs.poisson(lambda * kPi * radius * radius);
    for (std::uint64_t k = 0; k < n; ++k) {
        const double rr = radius * std::sqrt(rs.uniform01());
        const double az = rs.uniform(0.0, 2.0 * kPi);
        emit(rr, az);
    }
}

}  // namespace detail

/// Homogeneous PPP on the spherical cap (cell-partitioned thinning of the
/// equivalent density lambda b^2 sin(theta); survivors mapped to Cartesian).
inline PointSet sample_ppp_on_cap(const SphericalCapSpec& cap, double lambda,
                                  StreamKey key, int n_intervals = 64) {
    PointSet ps;
    ps.tier = Tier::HAP;
    const double b = cap.sphere_radius;
    detail::sample_cap_cells(cap, lambda, key, n_intervals, [&](double th, double ph) {
        PointRecord rec;
        rec.params = {th, ph, 0.0};
        rec.n_params = 2;
        const double sth = std::sin(th);
        rec.cartesian = {b * sth * std::cos(ph), b * sth * std::sin(ph), b * std::cos(th)};
        ps.points.push_back(rec);
    });
    return ps;
}

/// Homogeneous PPP on the ground disk around the typical user. In the
/// Earth-centered frame the disk lies in the plane z = a, tangent at the
/// user; pass the earth radius as plane_z to get that frame.
inline PointSet sample_ppp_on_disk(double lambda, double radius, StreamKey key,
                                   double plane_z) {
    PointSet ps;
    ps.tier = Tier::BS;
    detail::sample_disk(lambda, radius, key, [&](double rr, double az) {
        PointRecord rec;
        rec.params = {rr, az, 0.0};
        rec.n_params = 2;
        rec.cartesian = {rr * std::cos(az), rr * std::sin(az), plane_z};
        ps.points.push_back(rec);
    });
    return ps;
}

/// PPP in the shell with volume density lambda/(2 dh); surface density
/// lambda is preserved as dh -> 0.
inline PointSet sample_ppp_in_shell(const ShellSpec& shell, double lambda,
                                    StreamKey key, int n_intervals = 64) {
    PointSet ps;
    ps.tier = Tier::HAP;
    detail::sample_shell_cells(shell, lambda, key, n_intervals,
                               [&](double r, double th, double ph) {
        PointRecord rec;
        rec.params = {r, th, ph};
        rec.n_params = 3;
        const double sth = std::sin(th);
        rec.cartesian = {r * sth * std::cos(ph), r * sth * std::sin(ph), r * std::cos(th)};
        ps.points.push_back(rec);
    });
    return ps;
}

/// PPP on an arbitrary chart with ambient density lambda(x). Each cell's
/// dominating density is the max of the equivalent density over a 3^n probe
/// grid inflated by 5%; a realized retention ratio above 1 means the bound
/// was violated and is a hard error.
inline PointSet sample_ppp_on_manifold(
    const ParametricManifold& mfd,
    const std::function<double(const std::vector<double>&)>& density, StreamKey key,
    int n_intervals = 64, Tier tier = Tier::HAP) {
    mfd.validate();
    if (n_intervals < 1) throw std::domain_error("n_intervals must be >= 1");
    const int n = mfd.dimension;
    if (n > 3) throw capability_error("manifold sampler supports charts with n <= 3");

    auto lam_eq = [&](const std::vector<double>& x) {
        const double lam = density(x);
        if (lam < 0.0) throw std::domain_error("density must be >= 0");
        return lam * metric_factor(mfd, x);
    };

    PointSet ps;
    ps.tier = tier;
    std::vector<int> cell(n, 0);
    std::vector<double> lo(n), hi(n), x(n);
    std::uint64_t cell_index = 0;
    bool done = false;
    while (!done) {
        double cell_vol = 1.0;
        for (int ax = 0; ax < n; ++ax) {
            const double w = mfd.axis_width(ax) / n_intervals;
            lo[ax] = mfd.domain[ax][0] + cell[ax] * w;
            hi[ax] = (cell[ax] + 1 == n_intervals) ? mfd.domain[ax][1] : lo[ax] + w;
            cell_vol *= hi[ax] - lo[ax];
        }

        // probe grid {lo, mid, hi}^n, then 5% safety margin
        double peak = 0.0;
        const int probes = static_cast<int>(std::pow(3, n));
        for (int p = 0; p < probes; ++p) {
            int rem = p;
            for (int ax = 0; ax < n; ++ax) {
                const int pos = rem % 3;
                rem /= 3;
                x[ax] = pos == 0 ? lo[ax] : (pos == 1 ? 0.5 * (lo[ax] + hi[ax]) : hi[ax]);
            }
            peak = std::max(peak, lam_eq(x));
        }
        const double lam_max = 1.05 * peak;

        if (lam_max > 0.0) {
            auto rs = key.child(cell_index).open();
            const std::uint64_t cnt = rs.poisson(lam_max * cell_vol);
            for (std::uint64_t k = 0; k < cnt; ++k) {
                for (int ax = 0; ax < n; ++ax) x[ax] = rs.uniform(lo[ax], hi[ax]);
                const double ratio = lam_eq(x) / lam_max;
                if (ratio > 1.0)
                    throw numerical_error(
                        "thinning bound violated; probe grid missed the density peak",
                        ratio - 1.0);
                if (rs.uniform01() < ratio) {
                    PointRecord rec;
                    rec.n_params = n;
                    for (int ax = 0; ax < n; ++ax) rec.params[ax] = x[ax];
                    const auto img = mfd.map(x);
                    for (std::size_t c = 0; c < img.size() && c < 3; ++c)
                        rec.cartesian[c] = img[c];
                    ps.points.push_back(rec);
                }
            }
        }

        ++cell_index;
        done = true;
        for (int ax = 0; ax < n; ++ax) {
            if (++cell[ax] < n_intervals) {
                done = false;
                break;
            }
            cell[ax] = 0;
        }
    }
    return ps;
}

}  // namespace hapss::geometry
