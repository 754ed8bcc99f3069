#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"
#include "internal.hpp"

namespace ergcap {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// z log z with the 0 log 0 = 0 convention.
double xlogx(double z) { return z > 0.0 ? z * std::log(z) : 0.0; }
double x2logx(double z) { return z > 0.0 ? z * z * std::log(z) : 0.0; }

// Integral of p(z) g(z) over [a, b] for linear p and g analytic on a disc
// well clear of the segment (used when b <= 2a, where the closed forms cancel).
template <typename G>
double smooth_piece(double a, double b, double pa, double pb, G g) {
    const double h = b - a;
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double u) { return ((1.0 - u) * pa + u * pb) * g(a + h * u); }, 0.0, 1.0) * h;
}

/// Piecewise-linear density. On segment i the density is
/// p(z) = p_i + slope_[i] * (z - z_i) for z in [z_i, z_{i+1}]. Moments use
/// closed forms in endpoint values, or Gauss-Legendre on short segments.
class Tabulated final : public FadingDistribution {
public:
    explicit Tabulated(std::vector<GridPoint> grid) : grid_(std::move(grid)) {
        const std::size_t n = grid_.size();
        double mass = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            mass += 0.5 * (grid_[i].pdf + grid_[i + 1].pdf) * (grid_[i + 1].z - grid_[i].z);
        }
        if (!(mass > 0.0) || !std::isfinite(mass)) throw FormatError("tabulated: density has no mass");
        for (auto& p : grid_) p.pdf /= mass;

        cumulative_.assign(n, 0.0);
        slope_.assign(n - 1, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dz = grid_[i + 1].z - grid_[i].z;
            slope_[i] = (grid_[i + 1].pdf - grid_[i].pdf) / dz;
            cumulative_[i + 1] = cumulative_[i] + 0.5 * (grid_[i].pdf + grid_[i + 1].pdf) * dz;
        }
        // Absorb rounding so the cdf ends at exactly 1.
        for (auto& c : cumulative_) c /= cumulative_.back();

        sup_ = grid_.front().z;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (grid_[i].pdf > 0.0 || grid_[i + 1].pdf > 0.0) sup_ = grid_[i + 1].z;
        }
        mean_ = head_mean(inf);
        inverse_mean_ = tail_inverse_integral(0.0);
        log_mean_ = segment_sum(0.0, inf, [](double a, double b, double pa, double pb) {
            const double h = b - a;
            if (a > 0.0 && b <= 2.0 * a) return smooth_piece(a, b, pa, pb, [](double z) { return std::log(z); });
            // p(z) = pa + s (z - a); antiderivatives of log z and (z - a) log z.
            const double s = (pb - pa) / h;
            auto log_anti = [](double z) { return xlogx(z) - z; };
            auto lin_anti = [&](double z) { return 0.5 * x2logx(z) - 0.25 * z * z - a * (xlogx(z) - z); };
            return pa * (log_anti(b) - log_anti(a)) + s * (lin_anti(b) - lin_anti(a));
        });
        diversity_ = estimate_diversity();
    }

    std::string name() const override { return "tabulated"; }

    double pdf(double z) const override {
        if (z < grid_.front().z || z > grid_.back().z) return 0.0;
        const std::size_t i = segment_of(z);
        return std::max(0.0, grid_[i].pdf + slope_[i] * (z - grid_[i].z));
    }
    double cdf(double z) const override {
        if (z <= grid_.front().z) return 0.0;
        if (z >= grid_.back().z) return 1.0;
        const std::size_t i = segment_of(z);
        const double dz = z - grid_[i].z;
        return std::min(1.0, cumulative_[i] + grid_[i].pdf * dz + 0.5 * slope_[i] * dz * dz);
    }
    double survival(double z) const override {
        if (z <= grid_.front().z) return 1.0;
        if (z >= grid_.back().z) return 0.0;
        const std::size_t i = segment_of(z);
        const double dz = grid_[i + 1].z - z;
        // Mass of the rest of segment i plus everything above it.
        const double rest = pdf(z) * dz + 0.5 * slope_[i] * dz * dz;
        return std::max(0.0, (1.0 - cumulative_[i + 1]) + rest);
    }

    double mean() const override { return mean_; }
    double inverse_mean() const override { return inverse_mean_; }
    double log_mean() const override { return log_mean_; }
    double support_sup() const override { return sup_; }
    double diversity_order() const override { return diversity_; }

    double tail_inverse_integral(double t) const override {
        return segment_sum(std::max(t, 0.0), inf, [](double a, double b, double pa, double pb) {
            const double h = b - a;
            if (a == 0.0) return pa > 0.0 ? inf : pb;
            if (b <= 2.0 * a) return smooth_piece(a, b, pa, pb, [](double z) { return 1.0 / z; });
            const double s = (pb - pa) / h;
            return (pa - s * a) * std::log(b / a) + s * h;
        });
    }
    double head_mean(double t) const override {
        return segment_sum(0.0, t, [](double a, double b, double pa, double pb) {
            return (b - a) * (pa * (2.0 * a + b) + pb * (a + 2.0 * b)) / 6.0;
        });
    }

    double expect(const numerics::Integrand& g, double lo, double hi, double rel_tol) const override {
        numerics::QuadOptions opts;
        opts.rel_tol = rel_tol;
        opts.abs_tol = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
            const double a = std::max(lo, grid_[i].z);
            const double b = std::min(hi, grid_[i + 1].z);
            if (!(a < b) || (grid_[i].pdf == 0.0 && grid_[i + 1].pdf == 0.0)) continue;
            const double z0 = grid_[i].z;
            const double p0 = grid_[i].pdf;
            const double s = slope_[i];
            total += numerics::integrate_finite(
                         [&](double z) { return g(z) * std::max(0.0, p0 + s * (z - z0)); }, a, b, opts)
                         .value;
        }
        return total;
    }

    double sample(RandomStream& rng) const override {
        const double u = rng.uniform();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
        i = std::clamp<std::size_t>(i, 1, grid_.size() - 1) - 1;
        const double r = u - cumulative_[i];
        const double p0 = grid_[i].pdf;
        const double s = slope_[i];
        // Solve p0 x + s x^2 / 2 = r in its cancellation-free form.
        const double disc = std::max(0.0, p0 * p0 + 2.0 * s * r);
        const double denom = p0 + std::sqrt(disc);
        const double x = denom > 0.0 ? 2.0 * r / denom : 0.0;
        return std::min(grid_[i].z + x, grid_[i + 1].z);
    }

protected:
    double scale_hint() const override { return mean_ > 0.0 ? mean_ : 1.0; }

private:
    std::size_t segment_of(double z) const {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), z,
                                   [](double v, const GridPoint& p) { return v < p.z; });
        std::size_t i = static_cast<std::size_t>(std::distance(grid_.begin(), it));
        return std::clamp<std::size_t>(i, 1, grid_.size() - 1) - 1;
    }

    template <typename Piece>
    double segment_sum(double lo, double hi, Piece piece) const {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
            const double a = std::max(lo, grid_[i].z);
            const double b = std::min(hi, grid_[i + 1].z);
            if (!(a < b) || (grid_[i].pdf == 0.0 && grid_[i + 1].pdf == 0.0)) continue;
            const double pa = grid_[i].pdf + slope_[i] * (a - grid_[i].z);
            const double pb = grid_[i].pdf + slope_[i] * (b - grid_[i].z);
            total += piece(a, b, pa, pb);
        }
        return total;
    }

    // Least-squares slope of log F against log z over the five smallest grid
    // points where both are defined.
    double estimate_diversity() const {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < grid_.size() && pts.size() < 5; ++i) {
            const double f = cumulative_[i];
            if (grid_[i].z > 0.0 && f > 0.0) pts.emplace_back(std::log(grid_[i].z), std::log(f));
        }
        if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        double mx = 0.0;
        double my = 0.0;
        for (auto [x, y] : pts) {
            mx += x;
            my += y;
        }
        mx /= pts.size();
        my /= pts.size();
        double sxy = 0.0;
        double sxx = 0.0;
        for (auto [x, y] : pts) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<GridPoint> grid_;
    std::vector<double> cumulative_;
    std::vector<double> slope_;
    double sup_ = 0.0;
    double mean_ = 0.0;
    double inverse_mean_ = 0.0;
    double log_mean_ = 0.0;
    double diversity_ = 0.0;
};

}  // namespace

DistributionPtr make_tabulated(std::vector<GridPoint> grid) {
    if (grid.size() < 4) throw FormatError("tabulated: need at least 4 grid points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid[i];
        if (!std::isfinite(p.z) || !std::isfinite(p.pdf)) throw FormatError("tabulated: non-finite entry");
        if (p.z < 0.0 || p.pdf < 0.0) throw FormatError("tabulated: negative entry");
        if (i > 0 && !(p.z > grid[i - 1].z)) throw FormatError("tabulated: z must be strictly increasing");
    }
    return detail::checked(std::make_shared<Tabulated>(std::move(grid)));
}

std::vector<GridPoint> read_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("tabulated: cannot open '" + path + "'");
    std::vector<GridPoint> grid;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError("tabulated: line " + std::to_string(line_no) + " is not 'z,pdf'");
        }
        const std::string a = line.substr(0, comma);
        const std::string b = line.substr(comma + 1);
        double z = 0.0;
        double p = 0.0;
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        try {
            z = std::stod(a, &used_a);
            p = std::stod(b, &used_b);
        } catch (const std::exception&) {
            if (grid.empty() && line_no == 1) continue;  // header
            throw FormatError("tabulated: line " + std::to_string(line_no) + " is not numeric");
        }
        if (a.find_first_not_of(" \t", used_a) != std::string::npos ||
            b.find_first_not_of(" \t", used_b) != std::string::npos) {
            throw FormatError("tabulated: line " + std::to_string(line_no) + " has trailing characters");
        }
        grid.push_back({z, p});
    }
    return grid;
}

DistributionPtr load_tabulated_csv(const std::string& path) { return make_tabulated(read_tabulated_csv(path)); }

}  // namespace ergcap
