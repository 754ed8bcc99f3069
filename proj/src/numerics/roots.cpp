#include "ergcap/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ergcap/error.hpp"

namespace ergcap::numerics {

RootResult find_root_monotone(const std::function<double(double)>& g, Bracket bracket, double tol) {
    if (!(bracket.lo < bracket.hi)) throw DomainError("find_root_monotone: bracket requires lo < hi");
    if (!(tol > 0.0)) throw DomainError("find_root_monotone: tol must be positive");

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = g(a);
    double fb = g(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (std::signbit(fa) == std::signbit(fb) || std::isnan(fa) || std::isnan(fb)) {
        throw BracketError("find_root_monotone: no sign change over bracket");
    }

    // Brent-Dekker: b is the best estimate, [b, c] always brackets the root.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    constexpr int max_iterations = 300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 1; iter <= max_iterations; ++iter) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, iter};

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = g(b);
    }
    return {b, fb, max_iterations};
}

MaximizeResult maximize_unimodal(const std::function<double(double)>& h, Bracket bracket, double tol,
                                 MaximizeOptions opts) {
    if (!(bracket.lo < bracket.hi)) throw DomainError("maximize_unimodal: bracket requires lo < hi");
    if (opts.spacing == GridSpacing::logarithmic && !(bracket.lo > 0.0)) {
        throw DomainError("maximize_unimodal: logarithmic grid requires lo > 0");
    }
    const int n = std::max(opts.grid_points, 3);

    // Work in the grid's own coordinate so golden section sees a uniform scale.
    const bool log_grid = opts.spacing == GridSpacing::logarithmic;
    const double ulo = log_grid ? std::log(bracket.lo) : bracket.lo;
    const double uhi = log_grid ? std::log(bracket.hi) : bracket.hi;
    auto to_x = [&](double u) { return log_grid ? std::exp(u) : u; };
    auto hu = [&](double u) { return h(to_x(u)); };

    std::vector<double> grid(n);
    std::vector<double> values(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        grid[i] = (i == n - 1) ? uhi : ulo + (uhi - ulo) * i / (n - 1);
        values[i] = hu(grid[i]);
        if (values[i] > values[best]) best = i;
    }

    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, n - 1)];
    constexpr double invphi = 0.6180339887498948482045868343656381;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = hu(x1);
    double f2 = hu(x2);
    const double stop = tol > 0.0 ? tol : 1e-12;
    while (std::abs(b - a) > stop) {
        if (f1 >= f2) {  // ties move left so plateaus resolve to the smaller argument
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = hu(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = hu(x2);
        }
    }

    MaximizeResult result{grid[best], values[best]};
    const double candidates[2][2] = {{x1, f1}, {x2, f2}};
    for (const auto& cand : candidates) {
        if (cand[1] > result.max) result = {cand[0], cand[1]};
    }
    result.argmax = to_x(result.argmax);
    return result;
}

}  // namespace ergcap::numerics
