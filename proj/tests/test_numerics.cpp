#include <cmath>
#include <numbers>

#include "ergcap/error.hpp"
#include "ergcap/numerics/quadrature.hpp"
#include "ergcap/numerics/roots.hpp"
#include "ergcap/numerics/special.hpp"
#include "test_support.hpp"

using namespace ergcap;
using namespace ergcap::numerics;

TEST_SUITE("quadrature") {
    TEST_CASE("semi-infinite reference integrals") {
        CHECK_NEAR(integrate_semi_infinite([](double z) { return std::exp(-z); }, 0.0).value, 1.0, 1e-12);
        CHECK_NEAR(integrate_semi_infinite([](double z) { return z * std::exp(-z); }, 0.0).value, 1.0, 1e-12);
        CHECK_NEAR(integrate_semi_infinite([](double z) { return std::pow(z, -3.0); }, 1.0).value, 0.5, 1e-12);
    }

    TEST_CASE("finite reference integrals") {
        CHECK_NEAR(integrate_finite([](double) { return 1.0; }, 0.0, 1.0).value, 1.0, 1e-14);
        CHECK_NEAR(integrate_finite([](double z) { return z; }, 0.0, 2.0).value, 2.0, 1e-14);
        // integrable log singularity at the open endpoint
        CHECK_NEAR(integrate_finite([](double z) { return std::log(z); }, 0.0, 1.0).value, -1.0, 1e-10);
        CHECK_NEAR(integrate_finite([](double z) { return 1.0 / std::sqrt(z); }, 0.0, 4.0).value, 4.0, 1e-9);
    }

    TEST_CASE("empty and reversed intervals") {
        const auto r = integrate_finite([](double) { return 1.0; }, 3.0, 3.0);
        CHECK(r.value == 0.0);
        CHECK(r.evaluations >= 1);
        CHECK_THROWS_AS(integrate_finite([](double) { return 1.0; }, 1.0, 0.0), DomainError);
    }

    TEST_CASE("kronrod rule integrates polynomials exactly") {
        const auto r = integrate_finite([](double z) { return std::pow(z, 13) - 3.0 * std::pow(z, 7); }, -1.0, 2.0);
        const double exact = (std::pow(2.0, 14) - 1.0) / 14.0 - 3.0 * (std::pow(2.0, 8) - 1.0) / 8.0;
        CHECK_REL(r.value, exact, 1e-14);
    }

    TEST_CASE("divergent integral reports partial value") {
        QuadOptions opts;
        opts.max_subdivisions = 50;
        try {
            integrate_finite([](double z) { return 1.0 / z; }, 0.0, 1.0, opts);
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(e.partial_value() > 1.0);
            CHECK(e.error_estimate() > 0.0);
        }
    }

    TEST_CASE("error estimate is nonnegative and meaningful") {
        const auto r = integrate_semi_infinite([](double z) { return std::exp(-z * z); }, 0.0, 1e-10);
        CHECK(r.abs_error_estimate >= 0.0);
        CHECK(r.evaluations >= 15);
        CHECK_NEAR(r.value, std::sqrt(std::numbers::pi) / 2.0, 1e-10);
    }

    TEST_CASE("linearity over random smooth integrands") {
        test::Lcg rng(7);
        for (int trial = 0; trial < 25; ++trial) {
            const double b1 = rng.uniform(0.3, 3.0);
            const double c1 = rng.uniform(-0.9, 0.9);
            const double b2 = rng.uniform(0.3, 3.0);
            const double p2 = rng.uniform(0.0, 3.0);
            const double alpha = rng.uniform(-2.0, 2.0);
            const double beta = rng.uniform(-2.0, 2.0);
            auto f = [=](double z) { return std::exp(-b1 * z) * (1.0 + c1 * std::sin(z)); };
            auto g = [=](double z) { return std::pow(z, p2) * std::exp(-b2 * z); };
            const double tol = 1e-10;
            const double lhs = integrate_semi_infinite([&](double z) { return alpha * f(z) + beta * g(z); }, 0.0, tol).value;
            const double fi = integrate_semi_infinite(f, 0.0, tol).value;
            const double gi = integrate_semi_infinite(g, 0.0, tol).value;
            const double rhs = alpha * fi + beta * gi;
            CHECK(std::abs(lhs - rhs) <= 10.0 * tol * (std::abs(alpha * fi) + std::abs(beta * gi)) + 1e-13);
        }
    }
}

TEST_SUITE("roots") {
    TEST_CASE("reference roots") {
        CHECK_NEAR(find_root_monotone([](double x) { return x - 2.0; }, {0.0, 5.0}, 1e-12).root, 2.0, 1e-12);
        CHECK_NEAR(find_root_monotone([](double x) { return std::log(x); }, {0.1, 10.0}, 1e-12).root, 1.0, 1e-12);
    }

    TEST_CASE("missing sign change is a bracketing error") {
        CHECK_THROWS_AS(find_root_monotone([](double x) { return x * x + 1.0; }, {-1.0, 1.0}), BracketError);
        CHECK_THROWS_AS(find_root_monotone([](double x) { return x; }, {1.0, 0.0}), DomainError);
    }

    TEST_CASE("residual bounded by slope times tolerance") {
        test::Lcg rng(11);
        for (int trial = 0; trial < 40; ++trial) {
            const double c = rng.uniform(0.5, 20.0);
            const double k = rng.uniform(0.2, 3.0);
            const double tol = 1e-10;
            // g(x) = exp(k x) - c, strictly increasing, root log(c)/k
            auto g = [=](double x) { return std::exp(k * x) - c; };
            const auto r = find_root_monotone(g, {-10.0, 10.0}, tol);
            const double slope = k * std::exp(k * r.root);
            CHECK(std::abs(g(r.root)) <= slope * tol + 1e-12);
            CHECK_NEAR(r.root, std::log(c) / k, tol);
        }
    }
}

TEST_SUITE("maximize") {
    TEST_CASE("reference maxima") {
        auto r1 = maximize_unimodal([](double x) { return -(x - 3.0) * (x - 3.0); }, {0.0, 10.0}, 1e-10);
        CHECK_NEAR(r1.argmax, 3.0, 1e-6);
        auto r2 = maximize_unimodal([](double x) { return x * std::exp(-x); }, {0.0, 10.0}, 1e-10);
        CHECK_NEAR(r2.argmax, 1.0, 1e-6);
        CHECK_NEAR(r2.max, std::exp(-1.0), 1e-14);
    }

    TEST_CASE("grid scan finds the global mode of a bimodal function") {
        auto h = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)) + 2.0 * std::exp(-4.0 * (x - 7.0) * (x - 7.0)); };
        auto r = maximize_unimodal(h, {0.0, 10.0}, 1e-10);
        CHECK_NEAR(r.argmax, 7.0, 1e-4);
        CHECK(r.max >= h(0.0));
        CHECK(r.max >= h(10.0));
    }

    TEST_CASE("logarithmic grid") {
        MaximizeOptions opts;
        opts.spacing = GridSpacing::logarithmic;
        auto r = maximize_unimodal([](double x) { return -std::pow(std::log(x / 1e-3), 2); }, {1e-6, 10.0}, 1e-10, opts);
        CHECK_REL(r.argmax, 1e-3, 1e-6);
        CHECK_THROWS_AS(maximize_unimodal([](double x) { return x; }, {0.0, 1.0}, 1e-10, opts), DomainError);
    }

    TEST_CASE("monotone function returns the bracket end") {
        auto r = maximize_unimodal([](double x) { return x; }, {0.0, 2.0}, 1e-10);
        CHECK(r.max >= 2.0 - 1e-9);
    }
}

TEST_SUITE("special functions") {
    TEST_CASE("reference values") {
        CHECK_REL(digamma(1.0), -euler_gamma, 1e-12);
        CHECK_REL(gamma_fn(5.0), 24.0, 1e-12);
        CHECK_REL(log_gamma(10.0), std::log(362880.0), 1e-12);
        for (double z : {0.0, 1.0, 2.0}) CHECK_NEAR(reg_lower_inc_gamma(1.0, z), 1.0 - std::exp(-z), 1e-15);
        CHECK_REL(reg_upper_inc_gamma(1.0, 30.0), std::exp(-30.0), 1e-12);
    }

    TEST_CASE("digamma recurrence") {
        for (double x = 0.5; x <= 50.0; x += 0.37) {
            CHECK_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-12 * std::max(1.0, std::abs(digamma(x + 1.0))));
        }
    }

    TEST_CASE("incomplete gamma saturates") {
        for (double n : {0.5, 1.0, 2.5, 10.0, 64.0}) CHECK_NEAR(reg_lower_inc_gamma(n, 700.0), 1.0, 1e-12);
    }

    TEST_CASE("domain violations") {
        CHECK_THROWS_AS(digamma(0.0), DomainError);
        CHECK_THROWS_AS(gamma_fn(-1.0), DomainError);
        CHECK_THROWS_AS(log_gamma(0.0), DomainError);
        CHECK_THROWS_AS(reg_lower_inc_gamma(0.0, 1.0), DomainError);
        CHECK_THROWS_AS(reg_lower_inc_gamma(1.0, -1.0), DomainError);
    }
}
