#pragma once

#include <cstddef>
#include <functional>

namespace ergcap::numerics {

using Integrand = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Tolerances for the adaptive Gauss-Kronrod driver. The driver stops once the
/// summed error estimate is below max(rel_tol * |value|, abs_tol).
struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_subdivisions = 4000;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b]. The rule never evaluates the
/// endpoints, so integrable endpoint singularities (log z at 0) are handled by
/// repeated bisection toward them. a == b returns exactly 0.
///
/// Throws DomainError if a > b, ConvergenceError when the subdivision budget
/// is exhausted before the tolerance is met.
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts);
QuadResult integrate_finite(const Integrand& f, double a, double b, double rel_tol = 1e-10);

/// Integral over [a, inf) via z = a + t/(1-t), t in [0, 1), followed by the
/// same adaptive driver on [0, 1].
QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& opts);
QuadResult integrate_semi_infinite(const Integrand& f, double a, double rel_tol = 1e-10);

}  // namespace ergcap::numerics
