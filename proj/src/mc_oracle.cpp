#include "ergcap/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "ergcap/error.hpp"
#include "ergcap/random.hpp"

namespace ergcap {
namespace {

constexpr std::uint64_t block_size = 65536;

// Streaming mean and centered second moment (Welford), merged with Chan's
// pairwise update.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }
    double std_error() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

struct BlockResult {
    Moments value;
    Moments power;
};

// Power policy D(z) of each scheme, normalized so that E[D] = 1.
std::function<double(double)> power_policy(const FadingDistribution& dist, Scheme scheme, double S,
                                           const McParams& params) {
    switch (scheme) {
        case Scheme::awgn:
        case Scheme::ra:
            return [](double) { return 1.0; };
        case Scheme::oa: {
            const double zt = params.oa_threshold ? *params.oa_threshold : oa_threshold(dist, S).z_t;
            if (!(zt > 0.0)) throw ParameterError("mc_capacity: oa threshold must be positive");
            return [zt, S](double z) { return z > zt ? (1.0 / zt - 1.0 / z) / S : 0.0; };
        }
        case Scheme::ci: {
            const double inv = dist.inverse_mean();
            return [inv](double z) { return 1.0 / (inv * z); };
        }
        case Scheme::tci: {
            if (!params.z_t) throw ParameterError("mc_capacity: tci needs a threshold");
            const double zt = *params.z_t;
            const double dmax = tci_dmax(dist, zt);
            return [zt, dmax](double z) { return z >= zt ? dmax * zt / z : 0.0; };
        }
        case Scheme::ctci: {
            if (!params.z_t) throw ParameterError("mc_capacity: ctci needs a threshold");
            const double zt = *params.z_t;
            const double dmax = ctci_dmax(dist, zt);
            if (std::isinf(dmax)) {
                const double inv = dist.inverse_mean();
                return [inv](double z) { return 1.0 / (inv * z); };
            }
            return [zt, dmax](double z) { return z >= zt ? dmax * zt / z : dmax; };
        }
    }
    throw ParameterError("mc_capacity: unknown scheme");
}

}  // namespace

McEstimate mc_capacity(const FadingDistribution& dist, Scheme scheme, double S, const McParams& params,
                       std::uint64_t n_samples, std::uint64_t seed) {
    if (!(S > 0.0) || !std::isfinite(S)) throw DomainError("mc_capacity: S must be positive and finite");
    if (n_samples < 2) throw ParameterError("mc_capacity: need at least 2 samples");

    McEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    if (scheme == Scheme::ci && !dist.a2_holds()) {
        est.degenerate = true;
        return est;
    }

    const auto policy = power_policy(dist, scheme, S, params);
    // For awgn the per-draw quantity is z itself; the capacity is formed after merging.
    const bool awgn = scheme == Scheme::awgn;

    const std::uint64_t n_blocks = (n_samples + block_size - 1) / block_size;
    std::vector<BlockResult> blocks(n_blocks);
    auto run_block = [&](std::uint64_t b) {
        auto rng = RandomStream::for_shard(seed, b);
        const std::uint64_t count = std::min(block_size, n_samples - b * block_size);
        BlockResult r;
        for (std::uint64_t i = 0; i < count; ++i) {
            const double z = dist.sample(rng);
            const double d = policy(z);
            r.value.add(awgn ? z : std::log1p(S * d * z));
            r.power.add(d);
        }
        blocks[b] = r;
    };

    unsigned threads = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_blocks));
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < n_blocks; b = next++) run_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    BlockResult total;
    for (const auto& b : blocks) {
        total.value.merge(b.value);
        total.power.merge(b.power);
    }
    if (awgn) {
        est.mean_nats = std::log1p(S * total.value.mean);
        est.std_error = S * total.value.std_error() / (1.0 + S * total.value.mean);
    } else {
        est.mean_nats = total.value.mean;
        est.std_error = total.value.std_error();
    }
    est.power_mean = total.power.mean;
    est.power_std_error = total.power.std_error();
    return est;
}

}  // namespace ergcap
