#include "ergcap/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ergcap/error.hpp"

namespace ergcap::numerics {
namespace {

// QUADPACK qk15 abscissae and weights. Even indices of xgk (1, 3, 5, 7) are
// the 7-point Gauss nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double uflow = std::numeric_limits<double>::min();

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

double eval(const Integrand& f, double x) {
    const double y = f(x);
    return std::isfinite(y) ? y : 0.0;
}

Segment kronrod15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = eval(f, center);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        f1[j] = eval(f, center - dx);
        f2[j] = eval(f, center + dx);
        const double sum = f1[j] + f2[j];
        resk += wgk[j] * sum;
        resabs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * sum;
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += wgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
    }
    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, value, err};
}

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opts) {
    if (!(a <= b)) throw DomainError("integrate_finite: requires a <= b");
    if (a == b) return {0.0, 0.0, 1};

    std::priority_queue<Segment> heap;
    std::vector<Segment> frozen;  // too narrow to split further
    Segment first = kronrod15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    std::size_t evaluations = 15;
    heap.push(first);

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    std::size_t subdivisions = 1;
    while (total_err > tolerance() && !heap.empty()) {
        if (subdivisions >= opts.max_subdivisions) {
            throw ConvergenceError("quadrature: subdivision limit reached", total, total_err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 100.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        const Segment left = kronrod15(f, worst.a, mid);
        const Segment right = kronrod15(f, mid, worst.b);
        evaluations += 30;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the segments to drop the drift of the running updates.
    double value = 0.0;
    double err = 0.0;
    for (const auto& s : frozen) {
        value += s.value;
        err += s.error;
    }
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    if (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) && !frozen.empty()) {
        throw ConvergenceError("quadrature: roundoff prevents reaching tolerance", value, err);
    }
    return {value, err, evaluations};
}

QuadResult integrate_finite(const Integrand& f, double a, double b, double rel_tol) {
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    return integrate_finite(f, a, b, opts);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& opts) {
    if (!std::isfinite(a)) throw DomainError("integrate_semi_infinite: lower limit must be finite");
    const Integrand mapped = [&f, a](double t) {
        const double s = 1.0 - t;
        const double z = a + t / s;
        if (!std::isfinite(z)) return 0.0;
        return f(z) / (s * s);
    };
    return integrate_finite(mapped, 0.0, 1.0, opts);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double rel_tol) {
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    return integrate_semi_infinite(f, a, opts);
}

}  // namespace ergcap::numerics
