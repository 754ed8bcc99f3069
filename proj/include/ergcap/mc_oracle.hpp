#pragma once

#include <cstdint>
#include <optional>

#include "ergcap/distributions.hpp"
#include "ergcap/schemes.hpp"

namespace ergcap {

struct McParams {
    /// Required for tci and ctci.
    std::optional<double> z_t;
    /// Water-filling cutoff for oa; solved with oa_threshold when absent.
    std::optional<double> oa_threshold;
    /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
    unsigned threads = 0;
};

struct McEstimate {
    double mean_nats = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    /// Empirical average power E[D] and its standard error.
    double power_mean = 0.0;
    double power_std_error = 0.0;
    /// Channel inversion without A2; the estimate is 0.
    bool degenerate = false;
};

/// Samples z from `dist` and averages log(1 + S D(z) z) for the scheme's
/// power policy D. For awgn the sample mean of z is plugged into
/// log(1 + S E[z]) and the error is propagated to first order.
///
/// Draws are split into fixed blocks of 65536, each with its own stream
/// derived from (seed, block index), and merged in block order, so the result
/// is identical for any thread count.
McEstimate mc_capacity(const FadingDistribution& dist, Scheme scheme, double S, const McParams& params,
                       std::uint64_t n_samples, std::uint64_t seed);

}  // namespace ergcap
