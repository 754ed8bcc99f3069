#include <cmath>
#include <string>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"
#include "internal.hpp"

namespace ergcap {
namespace {

class Scaled final : public FadingDistribution {
public:
    Scaled(DistributionPtr base, double c) : base_(std::move(base)), c_(c) {}

    std::string name() const override { return base_->name() + ",scale=" + std::to_string(c_); }

    double pdf(double z) const override { return base_->pdf(z / c_) / c_; }
    double cdf(double z) const override { return base_->cdf(z / c_); }
    double survival(double z) const override { return base_->survival(z / c_); }
    double mean() const override { return c_ * base_->mean(); }
    double inverse_mean() const override { return base_->inverse_mean() / c_; }
    double log_mean() const override { return base_->log_mean() + std::log(c_); }
    double support_sup() const override { return c_ * base_->support_sup(); }
    double diversity_order() const override { return base_->diversity_order(); }
    double tail_inverse_integral(double t) const override {
        return base_->tail_inverse_integral(t / c_) / c_;
    }
    double head_mean(double t) const override { return c_ * base_->head_mean(t / c_); }
    double expect(const numerics::Integrand& g, double lo, double hi, double rel_tol) const override {
        return base_->expect([&](double u) { return g(c_ * u); }, lo / c_, hi / c_, rel_tol);
    }
    double sample(RandomStream& rng) const override { return c_ * base_->sample(rng); }

protected:
    double scale_hint() const override { return c_; }

private:
    DistributionPtr base_;
    double c_;
};

int integer_parameter(const DistributionSpec& spec, const std::string& key, int fallback) {
    auto it = spec.parameters.find(key);
    if (it == spec.parameters.end()) return fallback;
    const double v = it->second;
    if (v != std::floor(v) || v < 1.0 || v > 1e6) {
        throw ParameterError(key + " must be a positive integer");
    }
    return static_cast<int>(v);
}

double require(const DistributionSpec& spec, const std::string& key) {
    auto it = spec.parameters.find(key);
    if (it == spec.parameters.end()) throw ParameterError("missing parameter " + key);
    return it->second;
}

}  // namespace

namespace detail {

DistributionPtr checked(DistributionPtr dist) {
    const double mass = quadrature_mass(*dist, 1e-12);
    if (std::abs(mass - 1.0) > 1e-9) {
        throw Error(dist->name() + ": density integrates to " + std::to_string(mass));
    }
    return dist;
}

}  // namespace detail

DistributionPtr make_scaled(DistributionPtr base, double c) {
    if (!base) throw ParameterError("make_scaled: null distribution");
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("make_scaled: scale must be > 0");
    return std::make_shared<Scaled>(std::move(base), c);
}

DistributionPtr make_distribution(const DistributionSpec& spec) {
    DistributionPtr dist;
    switch (spec.kind) {
        case DistributionKind::gamma_diversity:
            dist = make_gamma_diversity(integer_parameter(spec, "N", 1));
            break;
        case DistributionKind::max_exponential:
            dist = make_max_exponential(integer_parameter(spec, "K", 1));
            break;
        case DistributionKind::frechet:
            dist = make_frechet(require(spec, "alpha"), integer_parameter(spec, "K", 1));
            break;
        case DistributionKind::miso_multiuser:
            dist = make_miso_multiuser(integer_parameter(spec, "N", 1), integer_parameter(spec, "K", 1));
            break;
        case DistributionKind::tabulated:
            dist = make_tabulated(spec.grid);
            break;
    }
    if (auto it = spec.parameters.find("scale"); it != spec.parameters.end()) {
        dist = make_scaled(std::move(dist), it->second);
    }
    return dist;
}

}  // namespace ergcap
