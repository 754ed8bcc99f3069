#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"
#include "ergcap/numerics/special.hpp"
#include "internal.hpp"

namespace ergcap {
namespace {

using numerics::euler_gamma;
constexpr double inf = std::numeric_limits<double>::infinity();

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ---------------------------------------------------------------------------
// Gamma(N, 1)

class GammaDiversity final : public FadingDistribution {
public:
    explicit GammaDiversity(int n) : n_(n), log_norm_(numerics::log_gamma(n)) {}

    std::string name() const override { return "gamma:N=" + std::to_string(n_); }

    double pdf(double z) const override {
        if (z < 0.0) return 0.0;
        if (z == 0.0) return n_ == 1 ? 1.0 : 0.0;
        return std::exp((n_ - 1) * std::log(z) - z - log_norm_);
    }
    double cdf(double z) const override { return z <= 0.0 ? 0.0 : numerics::reg_lower_inc_gamma(n_, z); }
    double survival(double z) const override {
        return z <= 0.0 ? 1.0 : numerics::reg_upper_inc_gamma(n_, z);
    }
    double mean() const override { return n_; }
    double inverse_mean() const override { return n_ >= 2 ? 1.0 / (n_ - 1) : inf; }
    double log_mean() const override { return numerics::digamma(n_); }
    double diversity_order() const override { return n_; }

    double tail_inverse_integral(double t) const override {
        if (n_ == 1 || t <= 0.0) return FadingDistribution::tail_inverse_integral(t);
        return numerics::reg_upper_inc_gamma(n_ - 1, t) / (n_ - 1);
    }
    double head_mean(double t) const override {
        if (t <= 0.0) return 0.0;
        return n_ * numerics::reg_lower_inc_gamma(n_ + 1, t);
    }

    double sample(RandomStream& rng) const override {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += rng.exponential();
        return s;
    }

protected:
    double scale_hint() const override { return n_; }

private:
    int n_;
    double log_norm_;
};

// ---------------------------------------------------------------------------
// max of K unit exponentials

class MaxExponential final : public FadingDistribution {
public:
    explicit MaxExponential(int k) : k_(k) {
        for (int i = 1; i <= k_; ++i) harmonic_ += 1.0 / i;
        if (k_ == 1) {
            inverse_mean_ = inf;
            log_mean_ = -euler_gamma;
        } else if (k_ <= closed_form_limit) {
            // E[1/z] = sum_{j=2}^K (-1)^j C(K,j) j log j   (Frullani, term by term)
            // E[log z] = -gamma_em + sum_{j=2}^K (-1)^j C(K,j) log j
            double inv = 0.0;
            double lg = -euler_gamma;
            for (int j = 2; j <= k_; ++j) {
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                const double c = std::exp(log_binomial(k_, j));
                inv += sign * c * j * std::log(j);
                lg += sign * c * std::log(j);
            }
            inverse_mean_ = inv;
            log_mean_ = lg;
        } else {
            inverse_mean_ = quadrature_inverse_mean(*this);
            log_mean_ = quadrature_log_mean(*this);
        }
    }

    std::string name() const override { return "maxexp:K=" + std::to_string(k_); }

    double pdf(double z) const override {
        if (z < 0.0) return 0.0;
        if (z == 0.0) return k_ == 1 ? 1.0 : 0.0;
        return k_ * std::exp(-z + (k_ - 1) * std::log(-std::expm1(-z)));
    }
    double cdf(double z) const override {
        if (z <= 0.0) return 0.0;
        return std::exp(k_ * std::log(-std::expm1(-z)));
    }
    double survival(double z) const override {
        if (z <= 0.0) return 1.0;
        return -std::expm1(k_ * std::log1p(-std::exp(-z)));
    }
    double mean() const override { return harmonic_; }
    double inverse_mean() const override { return inverse_mean_; }
    double log_mean() const override { return log_mean_; }
    double diversity_order() const override { return k_; }

    double sample(RandomStream& rng) const override {
        // Inverse CDF: z = -log(1 - U^{1/K}).
        return -std::log1p(-std::exp(std::log(rng.uniform()) / k_));
    }

protected:
    double scale_hint() const override { return harmonic_; }

private:
    // Beyond this the alternating binomial sums lose too many digits.
    static constexpr int closed_form_limit = 12;
    int k_;
    double harmonic_ = 0.0;
    double inverse_mean_ = 0.0;
    double log_mean_ = 0.0;
};

// ---------------------------------------------------------------------------
// Frechet, K-user maximum: F(z) = exp(-K z^-alpha)

class Frechet final : public FadingDistribution {
public:
    Frechet(double alpha, int k) : alpha_(alpha), k_(k) {}

    std::string name() const override {
        return "frechet:alpha=" + format(alpha_) + ",K=" + std::to_string(k_);
    }

    double pdf(double z) const override {
        if (z <= 0.0) return 0.0;
        const double lw = std::log(k_) - alpha_ * std::log(z);  // log of w = K z^-alpha
        return std::exp(std::log(alpha_) + lw - std::exp(lw) - std::log(z));
    }
    double cdf(double z) const override { return z <= 0.0 ? 0.0 : std::exp(-w(z)); }
    double survival(double z) const override { return z <= 0.0 ? 1.0 : -std::expm1(-w(z)); }

    double mean() const override {
        if (alpha_ <= 1.0) return inf;
        return std::pow(k_, 1.0 / alpha_) * numerics::gamma_fn(1.0 - 1.0 / alpha_);
    }
    double inverse_mean() const override {
        return std::pow(k_, -1.0 / alpha_) * numerics::gamma_fn(1.0 + 1.0 / alpha_);
    }
    double log_mean() const override { return (std::log(k_) + euler_gamma) / alpha_; }
    double diversity_order() const override { return inf; }  // F vanishes faster than any power

    double tail_inverse_integral(double t) const override {
        if (t <= 0.0) return inverse_mean();
        return inverse_mean() * numerics::reg_lower_inc_gamma(1.0 + 1.0 / alpha_, w(t));
    }
    double head_mean(double t) const override {
        if (alpha_ <= 1.0) return FadingDistribution::head_mean(t);
        if (t <= 0.0) return 0.0;
        if (std::isinf(t)) return mean();
        return mean() * numerics::reg_upper_inc_gamma(1.0 - 1.0 / alpha_, w(t));
    }

    // Integrates in w = K z^-alpha, where f(z) dz = e^-w dw and the heavy
    // polynomial tail in z becomes a finite interval near w = 0.
    double expect(const numerics::Integrand& g, double lo, double hi, double rel_tol) const override {
        if (!(lo <= hi)) throw DomainError("expect: requires lo <= hi");
        lo = std::max(lo, 0.0);
        if (!(lo < hi)) return 0.0;
        const double w_lo = std::isinf(hi) ? 0.0 : w(hi);
        // exp(-w) underflows well before w = 800, so nothing above it contributes;
        // capping also keeps the last panel short enough to resolve.
        const double w_hi = lo == 0.0 ? inf : std::min(w(lo), 800.0);
        const numerics::Integrand in_w = [&](double v) {
            return g(std::pow(k_ / v, 1.0 / alpha_)) * std::exp(-v);
        };
        numerics::QuadOptions opts;
        opts.rel_tol = rel_tol;
        opts.abs_tol = 0.0;
        double total = 0.0;
        double left = w_lo;
        for (double knot : {1e-6, 1e-3, 1.0, 8.0, 32.0, 128.0}) {
            if (knot > left && knot < w_hi) {
                total += numerics::integrate_finite(in_w, left, knot, opts).value;
                left = knot;
            }
        }
        if (std::isinf(w_hi)) {
            total += numerics::integrate_semi_infinite(in_w, left, opts).value;
        } else if (left < w_hi) {
            total += numerics::integrate_finite(in_w, left, w_hi, opts).value;
        }
        return total;
    }

    double sample(RandomStream& rng) const override {
        return std::pow(-std::log(rng.uniform()) / k_, -1.0 / alpha_);
    }

protected:
    double scale_hint() const override { return std::pow(k_, 1.0 / alpha_); }

private:
    double w(double z) const { return k_ * std::pow(z, -alpha_); }
    static std::string format(double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    double alpha_;
    int k_;
};

// ---------------------------------------------------------------------------
// max over K users of Gamma(N, 1)

class MisoMultiuser final : public FadingDistribution {
public:
    MisoMultiuser(int n, int k) : n_(n), k_(k), log_norm_(numerics::log_gamma(n)) {
        mean_ = quadrature_mean(*this);
        inverse_mean_ = (n_ >= 2 || k_ >= 2) ? quadrature_inverse_mean(*this) : inf;
        log_mean_ = quadrature_log_mean(*this);
    }

    std::string name() const override {
        return "miso:N=" + std::to_string(n_) + ",K=" + std::to_string(k_);
    }

    double pdf(double z) const override {
        if (z < 0.0) return 0.0;
        if (z == 0.0) return (n_ == 1 && k_ == 1) ? 1.0 : 0.0;
        const double base = std::exp((n_ - 1) * std::log(z) - z - log_norm_);
        if (k_ == 1) return base;
        return k_ * std::pow(numerics::reg_lower_inc_gamma(n_, z), k_ - 1) * base;
    }
    double cdf(double z) const override {
        if (z <= 0.0) return 0.0;
        return std::pow(numerics::reg_lower_inc_gamma(n_, z), k_);
    }
    double survival(double z) const override {
        if (z <= 0.0) return 1.0;
        const double q = numerics::reg_upper_inc_gamma(n_, z);
        const double log_p = q < 0.5 ? std::log1p(-q) : std::log(numerics::reg_lower_inc_gamma(n_, z));
        return -std::expm1(k_ * log_p);
    }
    double mean() const override { return mean_; }
    double inverse_mean() const override { return inverse_mean_; }
    double log_mean() const override { return log_mean_; }
    double diversity_order() const override { return static_cast<double>(n_) * k_; }

    double sample(RandomStream& rng) const override {
        double best = 0.0;
        for (int user = 0; user < k_; ++user) {
            double s = 0.0;
            for (int i = 0; i < n_; ++i) s += rng.exponential();
            best = std::max(best, s);
        }
        return best;
    }

protected:
    double scale_hint() const override { return n_ + std::log(static_cast<double>(k_)); }

private:
    int n_;
    int k_;
    double log_norm_;
    double mean_ = 0.0;
    double inverse_mean_ = 0.0;
    double log_mean_ = 0.0;
};

}  // namespace

DistributionPtr make_gamma_diversity(int n_antennas) {
    if (n_antennas < 1) throw ParameterError("gamma_diversity: N must be an integer >= 1");
    return detail::checked(std::make_shared<GammaDiversity>(n_antennas));
}

DistributionPtr make_max_exponential(int n_users) {
    if (n_users < 1) throw ParameterError("max_exponential: K must be an integer >= 1");
    return detail::checked(std::make_shared<MaxExponential>(n_users));
}

DistributionPtr make_frechet(double alpha, int n_users) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("frechet: alpha must be > 0");
    if (n_users < 1) throw ParameterError("frechet: K must be an integer >= 1");
    return detail::checked(std::make_shared<Frechet>(alpha, n_users));
}

DistributionPtr make_miso_multiuser(int n_antennas, int n_users) {
    if (n_antennas < 1 || n_users < 1) {
        throw ParameterError("miso_multiuser: N and K must be integers >= 1");
    }
    return detail::checked(std::make_shared<MisoMultiuser>(n_antennas, n_users));
}

}  // namespace ergcap
