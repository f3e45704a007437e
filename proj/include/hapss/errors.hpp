#pragma once

#include <stdexcept>
#include <string>

namespace hapss {

/// Bad run configuration (unknown key, unit violation, invariant breach).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: quadrature did not converge, probability left [0,1]
/// beyond tolerance, and similar. Carries the offending residual.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Requested computation outside the supported range (e.g. exact coverage
/// for a Nakagami shape that needs Laplace derivatives of order >= 2).
class capability_error : public std::runtime_error {
public:
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

/// Constrained search has an empty feasible set.
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// Parametrization with a non-positive metric determinant at a probe point.
class degenerate_parametrization_error : public std::domain_error {
public:
    explicit degenerate_parametrization_error(const std::string& what)
        : std::domain_error(what) {}
};

}  // namespace hapss
