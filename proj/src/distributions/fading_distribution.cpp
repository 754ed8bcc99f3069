#include <algorithm>
#include <cmath>
#include <limits>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"

namespace ergcap {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

double FadingDistribution::support_sup() const { return inf; }

double FadingDistribution::tail_inverse_integral(double t) const {
    if (t <= 0.0) return inverse_mean();
    if (t >= support_sup()) return 0.0;
    return expect([](double z) { return 1.0 / z; }, t, inf);
}

double FadingDistribution::head_mean(double t) const {
    if (t <= 0.0) return 0.0;
    if (std::isinf(t)) return mean();
    return expect([](double z) { return z; }, 0.0, t);
}

std::vector<double> FadingDistribution::knots(double lo, double hi) const {
    const double s = scale_hint();
    std::vector<double> out = {s / 16.0, s / 4.0, s, 4.0 * s, 16.0 * s, 1.0};
    // Geometric knots toward a small positive lower limit keep 1/z-type
    // integrands well resolved.
    if (lo > 0.0) {
        for (double k = 10.0 * lo; k < s / 16.0; k *= 10.0) out.push_back(k);
    }
    std::erase_if(out, [&](double k) { return !(k > lo && k < hi); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double FadingDistribution::expect(const numerics::Integrand& g, double lo, double hi,
                                  double rel_tol) const {
    if (!(lo <= hi)) throw DomainError("expect: requires lo <= hi");
    lo = std::max(lo, 0.0);
    hi = std::min(hi, support_sup());
    if (!(lo < hi)) return 0.0;

    const numerics::Integrand weighted = [&](double z) {
        const double p = pdf(z);
        return p == 0.0 ? 0.0 : g(z) * p;
    };
    numerics::QuadOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 0.0;

    double total = 0.0;
    double left = lo;
    for (double k : knots(lo, hi)) {
        total += numerics::integrate_finite(weighted, left, k, opts).value;
        left = k;
    }
    if (std::isinf(hi)) {
        total += numerics::integrate_semi_infinite(weighted, left, opts).value;
    } else {
        total += numerics::integrate_finite(weighted, left, hi, opts).value;
    }
    return total;
}

bool FadingDistribution::finite_mean() const { return std::isfinite(mean()); }

bool FadingDistribution::a1_holds() const { return cdf(0.0) == 0.0 && std::isfinite(log_mean()); }

bool FadingDistribution::a2_holds() const { return std::isfinite(inverse_mean()); }

double quadrature_mass(const FadingDistribution& dist, double rel_tol) {
    return dist.expect([](double) { return 1.0; }, 0.0, inf, rel_tol);
}

double quadrature_mean(const FadingDistribution& dist, double rel_tol) {
    return dist.expect([](double z) { return z; }, 0.0, inf, rel_tol);
}

double quadrature_inverse_mean(const FadingDistribution& dist, double rel_tol) {
    return dist.expect([](double z) { return 1.0 / z; }, 0.0, inf, rel_tol);
}

double quadrature_log_mean(const FadingDistribution& dist, double rel_tol) {
    return dist.expect([](double z) { return std::log(z); }, 0.0, inf, rel_tol);
}

}  // namespace ergcap
