#include "ergcap/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ergcap/error.hpp"
#include "ergcap/numerics/roots.hpp"

namespace ergcap {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double power_rel_tol = 1e-12;

void require_power(double S) {
    if (!(S > 0.0) || !std::isfinite(S)) throw DomainError("average power S must be positive and finite");
}

// Scale used to bound threshold searches: the mean when finite, else the
// geometric mean exp(E[log z]).
double typical_gain(const FadingDistribution& dist) {
    const double m = dist.mean();
    return std::isfinite(m) ? m : std::exp(dist.log_mean());
}

}  // namespace

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::awgn: return "awgn";
        case Scheme::oa: return "oa";
        case Scheme::ra: return "ra";
        case Scheme::ci: return "ci";
        case Scheme::tci: return "tci";
        case Scheme::ctci: return "ctci";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
    for (Scheme s : {Scheme::awgn, Scheme::oa, Scheme::ra, Scheme::ci, Scheme::tci, Scheme::ctci}) {
        if (text == to_string(s)) return s;
    }
    return std::nullopt;
}

CapacityResult awgn_capacity(const FadingDistribution& dist, double S) {
    require_power(S);
    CapacityResult r;
    r.scheme = Scheme::awgn;
    r.avg_power = S;
    r.capacity_nats = std::log1p(S * dist.mean());
    return r;
}

double oa_average_power(const FadingDistribution& dist, double S, double z_t) {
    const double inv_zt = 1.0 / z_t;
    return dist.expect([inv_zt](double z) { return inv_zt - 1.0 / z; }, z_t, inf, power_rel_tol) / S;
}

ThresholdSolution oa_threshold(const FadingDistribution& dist, double S) {
    require_power(S);
    auto g = [&](double u) { return oa_average_power(dist, S, std::exp(u)) - 1.0; };

    const double hi = std::min(1.0 / S, dist.support_sup());
    double lo = hi * 1e-3;
    while (g(std::log(lo)) <= 0.0) {
        if (lo < 1e-290) throw BracketError("oa_threshold: could not bracket the water level");
        lo *= 1e-3;
    }
    const auto root = numerics::find_root_monotone(g, {std::log(lo), std::log(hi)}, 1e-13);
    const double z_t = std::exp(root.root);
    return {z_t, oa_average_power(dist, S, z_t) - 1.0, root.iterations};
}

CapacityResult oa_capacity(const FadingDistribution& dist, double S) {
    const auto th = oa_threshold(dist, S);
    const double z_t = th.z_t;
    CapacityResult r;
    r.scheme = Scheme::oa;
    r.avg_power = S;
    r.capacity_nats = dist.expect([z_t](double z) { return std::log(z / z_t); }, z_t, inf);
    r.threshold = z_t;
    r.power_residual = th.residual;
    return r;
}

CapacityResult ra_capacity(const FadingDistribution& dist, double S) {
    require_power(S);
    CapacityResult r;
    r.scheme = Scheme::ra;
    r.avg_power = S;
    r.capacity_nats = dist.expect([S](double z) { return std::log1p(S * z); }, 0.0, inf);
    r.d_max = 1.0;
    return r;
}

CapacityResult ci_capacity(const FadingDistribution& dist, double S) {
    require_power(S);
    CapacityResult r;
    r.scheme = Scheme::ci;
    r.avg_power = S;
    if (!dist.a2_holds()) {
        r.degenerate = true;
        return r;
    }
    r.capacity_nats = std::log1p(S / dist.inverse_mean());
    r.threshold = 0.0;
    return r;
}

double tci_dmax(const FadingDistribution& dist, double z_t) {
    if (!(z_t > 0.0) || !(z_t < dist.support_sup())) {
        throw DomainError("tci_dmax: threshold must lie in (0, sup z)");
    }
    return 1.0 / (z_t * dist.tail_inverse_integral(z_t));
}

double tci_average_power(const FadingDistribution& dist, double z_t, double d_max) {
    const double k = d_max * z_t;
    return dist.expect([k](double z) { return k / z; }, z_t, inf, power_rel_tol);
}

CapacityResult tci_capacity(const FadingDistribution& dist, double S, double z_t) {
    require_power(S);
    const double d_max = tci_dmax(dist, z_t);
    CapacityResult r;
    r.scheme = Scheme::tci;
    r.avg_power = S;
    r.capacity_nats = dist.survival(z_t) * std::log1p(S * d_max * z_t);
    r.threshold = z_t;
    r.d_max = d_max;
    r.power_residual = tci_average_power(dist, z_t, d_max) - 1.0;
    return r;
}

TciOptimum tci_optimize(const FadingDistribution& dist, double S) {
    require_power(S);
    const double scale = typical_gain(dist);
    const double lo = 1e-8 * scale;
    double hi;
    if (std::isfinite(dist.support_sup())) {
        hi = dist.support_sup() * (1.0 - 1e-9);
    } else {
        hi = scale;
        while (dist.survival(hi) > 1e-15 && hi < 1e300) hi *= 2.0;
    }

    int evaluations = 0;
    auto objective = [&](double z_t) {
        ++evaluations;
        const double d_max = 1.0 / (z_t * dist.tail_inverse_integral(z_t));
        return dist.survival(z_t) * std::log1p(S * d_max * z_t);
    };
    numerics::MaximizeOptions opts;
    opts.grid_points = 64;
    opts.spacing = numerics::GridSpacing::logarithmic;
    const auto best = numerics::maximize_unimodal(objective, {lo, hi}, 1e-10, opts);

    TciOptimum out;
    out.capacity = tci_capacity(dist, S, best.argmax);
    out.threshold = {best.argmax, *out.capacity.power_residual, evaluations};
    return out;
}

double ctci_dmax(const FadingDistribution& dist, double z_t) {
    if (!(z_t >= 0.0)) throw DomainError("ctci_dmax: threshold must be >= 0");
    if (z_t == 0.0) return inf;
    if (std::isinf(z_t) || z_t >= dist.support_sup()) return 1.0;
    return 1.0 / (dist.cdf(z_t) + z_t * dist.tail_inverse_integral(z_t));
}

double ctci_average_power(const FadingDistribution& dist, double z_t, double d_max) {
    const double below = dist.expect([](double) { return 1.0; }, 0.0, z_t, power_rel_tol);
    const double k = d_max * z_t;
    const double above = std::isinf(z_t) ? 0.0 : dist.expect([k](double z) { return k / z; }, z_t, inf, power_rel_tol);
    return d_max * below + above;
}

CapacityResult ctci_capacity(const FadingDistribution& dist, double S, double z_t) {
    require_power(S);
    if (!(z_t >= 0.0)) throw DomainError("ctci_capacity: threshold must be >= 0");
    CapacityResult r;
    if (z_t == 0.0) {
        r = ci_capacity(dist, S);
        r.d_max = inf;
    } else if (std::isinf(z_t)) {
        r = ra_capacity(dist, S);
        r.threshold = inf;
        r.power_residual = ctci_average_power(dist, z_t, 1.0) - 1.0;
    } else {
        const double d_max = ctci_dmax(dist, z_t);
        const double gain = S * d_max;
        r.capacity_nats = dist.expect([gain](double z) { return std::log1p(gain * z); }, 0.0, z_t) +
                          dist.survival(z_t) * std::log1p(gain * z_t);
        r.avg_power = S;
        r.threshold = z_t;
        r.d_max = d_max;
        r.power_residual = ctci_average_power(dist, z_t, d_max) - 1.0;
    }
    r.scheme = Scheme::ctci;
    return r;
}

}  // namespace ergcap
