#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ergcap/distributions.hpp"
#include "ergcap/schemes.hpp"

namespace ergcap {

/// High-SNR capacity gaps in nats. Gaps that do not exist (A2 fails, or the
/// mean is infinite) are +inf.
struct GapReport {
    double gap_oa_ra = 0.0;
    double gap_awgn_oa = 0.0;
    double gap_oa_ci = 0.0;
    double gap_awgn_ci = 0.0;
};

/// log E[z] - E[log z]; +inf when the mean is infinite.
double gap_awgn_oa(const FadingDistribution& dist);
/// E[log z] + log E[1/z]; +inf when A2 fails.
double gap_oa_ci(const FadingDistribution& dist);
/// log(E[z] E[1/z]), evaluated as the sum of the two gaps above.
double gap_awgn_ci(const FadingDistribution& dist);
GapReport gap_report(const FadingDistribution& dist);

/// Closed forms for N-antenna beamforming over Rayleigh fading together with
/// their leading-order large-N expansions.
struct SpaceDiversityGaps {
    double gap_oa_ci;          // psi(N) - log(N - 1)
    double gap_awgn_ci;        // log(1 + 1/(N - 1))
    double expansion_oa_ci;    // 1 / (2(N - 1))
    double expansion_awgn_ci;  // 1 / (N - 1)
};
/// Requires N >= 2 (DomainError otherwise).
SpaceDiversityGaps space_diversity_gaps(int n_antennas);

/// A value that comes from an asymptotic argument rather than an exact
/// evaluation. Never use it as a reference value.
struct ApproximateValue {
    double value;
    bool approximate = true;
};

/// Large-K estimate log(1 + gamma_em / log K) of the AWGN-CI gap under
/// K-user selection over Rayleigh fading. The exact counterpart is
/// gap_awgn_ci(*make_max_exponential(K)). Requires K >= 2.
ApproximateValue multiuser_gap_asymptotic(int n_users);

/// Heuristic large-K rate gamma_em / (log K (1 + log K)) for the OA-CI gap
/// under K-user Rayleigh selection. This is a conjecture, not a derived
/// result; it is exposed for comparison only. Requires K >= 2.
ApproximateValue multiuser_oa_ci_conjecture(int n_users);

using CapacityFunction = std::function<double(double)>;  // S -> capacity in nats

/// dC/d(log S) at S_hi by a two-sided difference with step 1e-3 in log S.
double prelog_numeric(const CapacityFunction& capacity, double S_hi);
/// 1 - Pr(outage).
double prelog_analytic(double outage_probability);

struct SlopeReport {
    Scheme scheme;
    std::optional<double> threshold;
    double slope;  // lim_{S->0} dC/dS; may be +inf
    bool analytic = true;
};

/// Analytic low-SNR slopes: AWGN and RA E[z], CI 1/E[1/z] (0 without A2), OA
/// sup z, and TCI / CTCI for each supplied threshold.
std::vector<SlopeReport> low_snr_slopes(const FadingDistribution& dist,
                                        const std::vector<double>& tci_thresholds = {},
                                        const std::vector<double>& ctci_thresholds = {});
double tci_low_snr_slope(const FadingDistribution& dist, double z_t);
double ctci_low_snr_slope(const FadingDistribution& dist, double z_t);

/// dC/dS at S_lo by a two-sided difference with relative step 1e-3.
double low_snr_slope_numeric(const CapacityFunction& capacity, double S_lo);

}  // namespace ergcap
