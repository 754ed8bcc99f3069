#include "ergcap/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "ergcap/error.hpp"
#include "ergcap/numerics/special.hpp"

namespace ergcap {
namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double log_step = 1e-3;
}  // namespace

double gap_awgn_oa(const FadingDistribution& dist) {
    if (!dist.finite_mean()) return inf;
    return std::log(dist.mean()) - dist.log_mean();
}

double gap_oa_ci(const FadingDistribution& dist) {
    if (!dist.a2_holds()) return inf;
    return dist.log_mean() + std::log(dist.inverse_mean());
}

double gap_awgn_ci(const FadingDistribution& dist) { return gap_awgn_oa(dist) + gap_oa_ci(dist); }

GapReport gap_report(const FadingDistribution& dist) {
    GapReport r;
    r.gap_oa_ra = 0.0;
    r.gap_awgn_oa = gap_awgn_oa(dist);
    r.gap_oa_ci = gap_oa_ci(dist);
    r.gap_awgn_ci = r.gap_awgn_oa + r.gap_oa_ci;
    return r;
}

SpaceDiversityGaps space_diversity_gaps(int n_antennas) {
    if (n_antennas < 2) throw DomainError("space_diversity_gaps: N must be >= 2");
    const double m = n_antennas - 1.0;
    return {numerics::digamma(n_antennas) - std::log(m), std::log1p(1.0 / m), 1.0 / (2.0 * m), 1.0 / m};
}

ApproximateValue multiuser_gap_asymptotic(int n_users) {
    if (n_users < 2) throw DomainError("multiuser_gap_asymptotic: K must be >= 2");
    return {std::log1p(numerics::euler_gamma / std::log(static_cast<double>(n_users)))};
}

ApproximateValue multiuser_oa_ci_conjecture(int n_users) {
    if (n_users < 2) throw DomainError("multiuser_oa_ci_conjecture: K must be >= 2");
    const double lk = std::log(static_cast<double>(n_users));
    return {numerics::euler_gamma / (lk * (1.0 + lk))};
}

double prelog_numeric(const CapacityFunction& capacity, double S_hi) {
    if (!(S_hi > 0.0)) throw DomainError("prelog_numeric: S must be positive");
    const double up = capacity(S_hi * std::exp(log_step));
    const double down = capacity(S_hi * std::exp(-log_step));
    return (up - down) / (2.0 * log_step);
}

double prelog_analytic(double outage_probability) {
    if (!(outage_probability >= 0.0 && outage_probability <= 1.0)) {
        throw DomainError("prelog_analytic: outage probability must lie in [0, 1]");
    }
    return 1.0 - outage_probability;
}

double tci_low_snr_slope(const FadingDistribution& dist, double z_t) {
    if (!(z_t > 0.0)) throw DomainError("tci_low_snr_slope: threshold must be > 0");
    if (z_t >= dist.support_sup()) return dist.support_sup();
    return dist.survival(z_t) / dist.tail_inverse_integral(z_t);
}

double ctci_low_snr_slope(const FadingDistribution& dist, double z_t) {
    if (!(z_t >= 0.0)) throw DomainError("ctci_low_snr_slope: threshold must be >= 0");
    if (z_t == 0.0) return dist.a2_holds() ? 1.0 / dist.inverse_mean() : 0.0;
    if (std::isinf(z_t) || z_t >= dist.support_sup()) return dist.mean();
    return (dist.head_mean(z_t) + z_t * dist.survival(z_t)) /
           (dist.cdf(z_t) + z_t * dist.tail_inverse_integral(z_t));
}

std::vector<SlopeReport> low_snr_slopes(const FadingDistribution& dist, const std::vector<double>& tci_thresholds,
                                        const std::vector<double>& ctci_thresholds) {
    std::vector<SlopeReport> out;
    out.push_back({Scheme::awgn, std::nullopt, dist.mean()});
    out.push_back({Scheme::ra, std::nullopt, dist.mean()});
    out.push_back({Scheme::ci, std::nullopt, dist.a2_holds() ? 1.0 / dist.inverse_mean() : 0.0});
    out.push_back({Scheme::oa, std::nullopt, dist.support_sup()});
    for (double zt : tci_thresholds) out.push_back({Scheme::tci, zt, tci_low_snr_slope(dist, zt)});
    for (double zt : ctci_thresholds) out.push_back({Scheme::ctci, zt, ctci_low_snr_slope(dist, zt)});
    return out;
}

double low_snr_slope_numeric(const CapacityFunction& capacity, double S_lo) {
    if (!(S_lo > 0.0)) throw DomainError("low_snr_slope_numeric: S must be positive");
    const double h = 1e-3 * S_lo;
    return (capacity(S_lo + h) - capacity(S_lo - h)) / (2.0 * h);
}

}  // namespace ergcap
