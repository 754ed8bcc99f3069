#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ergcap/numerics/quadrature.hpp"
#include "ergcap/random.hpp"

namespace ergcap {

/// Law of the effective channel gain z_eff = gamma / S, i.e. the
/// instantaneous SNR normalized by the average transmit power. Instances are
/// immutable after construction; sampling takes the random state explicitly.
///
/// Infinite quantities (an A2-violating inverse mean, unbounded support, a
/// heavy-tailed mean) are reported as +inf rather than thrown.
class FadingDistribution {
public:
    virtual ~FadingDistribution() = default;

    virtual std::string name() const = 0;

    virtual double pdf(double z) const = 0;
    virtual double cdf(double z) const = 0;
    /// 1 - cdf(z), evaluated without cancellation in the upper tail.
    virtual double survival(double z) const { return 1.0 - cdf(z); }

    virtual double mean() const = 0;
    /// E[1/z]; +inf when A2 fails.
    virtual double inverse_mean() const = 0;
    /// E[log z] in nats.
    virtual double log_mean() const = 0;
    /// sup{z : F(z) < 1}.
    virtual double support_sup() const;
    /// Exponent d with F(z) ~ z^d l(z) at 0.
    virtual double diversity_order() const = 0;

    /// Integral of z^{-1} f(z) over [t, inf).
    virtual double tail_inverse_integral(double t) const;
    /// Integral of z f(z) over [0, t].
    virtual double head_mean(double t) const;

    virtual double sample(RandomStream& rng) const = 0;

    /// Integral of g(z) f(z) over [lo, hi] (hi may be +inf). Pieces are split
    /// at the distribution's knots and each is integrated to rel_tol relative
    /// precision with no absolute floor, so tail integrals keep their digits.
    virtual double expect(const numerics::Integrand& g, double lo, double hi,
                          double rel_tol = 1e-10) const;

    bool finite_mean() const;
    /// A1 as far as it is checkable: F(0) = 0 and E[log z] finite.
    bool a1_holds() const;
    /// A2: E[1/z] finite.
    bool a2_holds() const;

protected:
    /// Characteristic scale of the bulk of the mass; used to place knots.
    virtual double scale_hint() const = 0;
    std::vector<double> knots(double lo, double hi) const;
};

using DistributionPtr = std::shared_ptr<const FadingDistribution>;

struct GridPoint {
    double z;
    double pdf;
};

enum class DistributionKind { gamma_diversity, max_exponential, frechet, miso_multiuser, tabulated };

/// Parsed description of a distribution, as produced by the CLI mini-language.
/// A "scale" parameter, when present, wraps the result in make_scaled.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::gamma_diversity;
    std::map<std::string, double> parameters;
    std::vector<GridPoint> grid;
};

/// Sum of N unit exponentials: Gamma(N, 1), maximum-ratio beamforming with N
/// transmit antennas over i.i.d. Rayleigh fading.
DistributionPtr make_gamma_diversity(int n_antennas);

/// Maximum of K unit exponentials: best-user selection among K Rayleigh users.
DistributionPtr make_max_exponential(int n_users);

/// Maximum of K i.i.d. Frechet(alpha) gains, CDF exp(-K z^-alpha).
DistributionPtr make_frechet(double alpha, int n_users);

/// Best of K users, each seeing a sum of N unit exponentials.
DistributionPtr make_miso_multiuser(int n_antennas, int n_users);

/// Piecewise-linear density through (z, pdf) points, renormalized to unit mass.
/// Requires >= 4 points, strictly increasing z >= 0 and pdf >= 0.
DistributionPtr make_tabulated(std::vector<GridPoint> grid);

/// Reads a two-column "z,pdf" CSV (optional header line). Throws FormatError
/// on unreadable or malformed input.
std::vector<GridPoint> read_tabulated_csv(const std::string& path);
/// read_tabulated_csv followed by make_tabulated.
DistributionPtr load_tabulated_csv(const std::string& path);

/// Law of c * z for z ~ base.
DistributionPtr make_scaled(DistributionPtr base, double c);

DistributionPtr make_distribution(const DistributionSpec& spec);

/// Plain quadrature of pdf-weighted moments, bypassing any closed forms a
/// distribution provides. Used for cross-checks.
double quadrature_mass(const FadingDistribution& dist, double rel_tol = 1e-12);
double quadrature_mean(const FadingDistribution& dist, double rel_tol = 1e-12);
double quadrature_inverse_mean(const FadingDistribution& dist, double rel_tol = 1e-12);
double quadrature_log_mean(const FadingDistribution& dist, double rel_tol = 1e-12);

}  // namespace ergcap
