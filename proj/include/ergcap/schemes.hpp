#pragma once

#include <optional>
#include <string_view>

#include "ergcap/distributions.hpp"

namespace ergcap {

/// Adaptive transmission schemes. All capacities are in nats per channel use
/// with unit noise variance, so the average SNR equals the average power S.
enum class Scheme { awgn, oa, ra, ci, tci, ctci };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view text);

struct CapacityResult {
    Scheme scheme = Scheme::awgn;
    double avg_power = 0.0;
    double capacity_nats = 0.0;
    std::optional<double> threshold;  // z_t, in z_eff units
    std::optional<double> d_max;
    std::optional<double> power_residual;  // E[D] - 1, by quadrature
    /// Set for channel inversion without A2: no finite inversion power exists.
    bool degenerate = false;
};

struct ThresholdSolution {
    double z_t = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// log(1 + S E[z]).
CapacityResult awgn_capacity(const FadingDistribution& dist, double S);

/// Water-filling cutoff: the z_t solving
///   (1/S) * integral_{z_t}^inf (1/z_t - 1/z) f(z) dz = 1,
/// searched in log z_t below min(1/S, sup z).
ThresholdSolution oa_threshold(const FadingDistribution& dist, double S);
CapacityResult oa_capacity(const FadingDistribution& dist, double S);

/// Constant power, rate adaptation only: E[log(1 + S z)].
CapacityResult ra_capacity(const FadingDistribution& dist, double S);

/// Full channel inversion: log(1 + S / E[1/z]). Returns 0 with the
/// degenerate flag when E[1/z] is infinite.
CapacityResult ci_capacity(const FadingDistribution& dist, double S);

/// Peak power ratio of truncated inversion: 1 / (z_t * integral_{z_t}^inf f(z)/z dz).
/// Does not depend on S. Throws DomainError unless 0 < z_t < sup z.
double tci_dmax(const FadingDistribution& dist, double z_t);
CapacityResult tci_capacity(const FadingDistribution& dist, double S, double z_t);

struct TciOptimum {
    ThresholdSolution threshold;
    CapacityResult capacity;
};

/// Maximizes the truncated-inversion capacity over z_t using a 64-point
/// log-spaced scan followed by golden section. On plateaus the smallest
/// near-optimal threshold wins.
TciOptimum tci_optimize(const FadingDistribution& dist, double S);

/// Peak power ratio of continuous-power truncated inversion:
/// 1 / (F(z_t) + z_t * integral_{z_t}^inf f(z)/z dz). Returns +inf at z_t = 0
/// (the channel-inversion limit) and 1 for z_t = +inf (constant power).
double ctci_dmax(const FadingDistribution& dist, double z_t);
/// Accepts z_t in [0, inf]; z_t = 0 reproduces ci_capacity and z_t = inf
/// reproduces ra_capacity.
CapacityResult ctci_capacity(const FadingDistribution& dist, double S, double z_t);

/// Average power E[D(z)] of each policy, integrated directly against the pdf.
double oa_average_power(const FadingDistribution& dist, double S, double z_t);
double tci_average_power(const FadingDistribution& dist, double z_t, double d_max);
double ctci_average_power(const FadingDistribution& dist, double z_t, double d_max);

}  // namespace ergcap
