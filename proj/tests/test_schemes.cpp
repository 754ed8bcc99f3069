#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"
#include "ergcap/numerics/special.hpp"
#include "ergcap/schemes.hpp"
#include "test_support.hpp"

using namespace ergcap;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

DistributionPtr spike(double c, double w) {
    return make_tabulated({{c - w, 0.0}, {c - 0.5 * w, 0.5}, {c, 1.0}, {c + 0.5 * w, 0.5}, {c + w, 0.0}});
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Gamma(2) water-filling constraint from closed-form incomplete gammas only:
// (1/S) [Q(2, z_t)/z_t - Q(1, z_t)] - 1.
double gamma2_oa_constraint(double S, double z_t) {
    return (numerics::reg_upper_inc_gamma(2.0, z_t) / z_t - numerics::reg_upper_inc_gamma(1.0, z_t)) / S - 1.0;
}

}  // namespace

TEST_SUITE("awgn") {
    TEST_CASE("reference values") {
        CHECK_NEAR(awgn_capacity(*make_gamma_diversity(2), 1.0).capacity_nats, std::log(3.0), 1e-15);
        CHECK_NEAR(awgn_capacity(*make_miso_multiuser(2, 2), 1.0).capacity_nats, std::log(3.75), 1e-10);
        const double S = 1e-12;
        CHECK_REL(awgn_capacity(*make_gamma_diversity(2), S).capacity_nats, 2.0 * S, 1e-9);
        CHECK_THROWS_AS(awgn_capacity(*make_gamma_diversity(2), 0.0), DomainError);
    }
}

TEST_SUITE("optimal adaptation") {
    TEST_CASE("threshold satisfies the power constraint") {
        for (const auto& d : {make_gamma_diversity(2), make_gamma_diversity(1), make_miso_multiuser(2, 2),
                              make_frechet(2.0, 3), make_max_exponential(4)}) {
            for (double S : {0.01, 1.0, 100.0, 1e6}) {
                CAPTURE(d->name());
                CAPTURE(S);
                const auto th = oa_threshold(*d, S);
                CHECK(std::abs(th.residual) < 1e-9);
                CHECK(th.z_t > 0.0);
                CHECK(th.z_t < 1.0 / S);
            }
        }
    }

    TEST_CASE("heavy-tailed threshold far below the bulk") {
        // Frechet(alpha = 2, K = 4) at 24 dB; reference values from 30-digit quadrature.
        const auto d = make_frechet(2.0, 4);
        const double S = std::pow(10.0, 2.4);
        CHECK_REL(oa_threshold(*d, S).z_t, 0.00397406119743161780, 1e-10);
        CHECK_NEAR(oa_capacity(*d, S).capacity_nats, 6.50972174852743629, 1e-9);
        CHECK_NEAR(ra_capacity(*d, S).capacity_nats, 6.50972132503572465, 1e-9);
    }

    TEST_CASE("gamma(2) threshold checked against closed-form constraint") {
        const auto th = oa_threshold(*make_gamma_diversity(2), 1.0);
        CHECK(std::abs(gamma2_oa_constraint(1.0, th.z_t)) < 1e-9);
    }

    TEST_CASE("threshold decreases with power") {
        auto d = make_gamma_diversity(2);
        CHECK(oa_threshold(*d, 10.0).z_t < oa_threshold(*d, 1.0).z_t);
        CHECK(oa_threshold(*d, 1e6).z_t < 1e-6);
    }

    TEST_CASE("S z_t lies in (0, 1] and approaches 1") {
        auto d = make_miso_multiuser(2, 2);
        double previous = 0.0;
        for (double db = -20.0; db <= 60.0; db += 10.0) {
            const double S = db_to_linear(db);
            const double s_zt = S * oa_threshold(*d, S).z_t;
            CHECK(s_zt > previous);
            CHECK(s_zt <= 1.0);
            previous = s_zt;
        }
        CHECK(previous > 0.9999);
    }

    TEST_CASE("no fading: water-filling equals AWGN") {
        const double c = 2.0;
        const double S = 3.0;
        double previous_gap = inf;
        for (double w : {0.5, 0.05, 0.005}) {
            const double gap = std::abs(oa_capacity(*spike(c, w), S).capacity_nats - std::log1p(S * c));
            CHECK(gap < previous_gap);
            previous_gap = gap;
        }
        CHECK(previous_gap < 1e-5);
    }

    TEST_CASE("water-filling and constant power nearly coincide at 20 dB") {
        auto d = make_miso_multiuser(2, 2);
        const double S = 100.0;
        const double diff = oa_capacity(*d, S).capacity_nats - ra_capacity(*d, S).capacity_nats;
        CHECK(diff >= 0.0);
        CHECK(diff / std::numbers::ln2 < 0.01);
    }

    TEST_CASE("fading beats AWGN at low SNR") {
        auto d = make_gamma_diversity(2);
        CHECK(oa_capacity(*d, 0.01).capacity_nats > awgn_capacity(*d, 0.01).capacity_nats);
    }
}

TEST_SUITE("rate adaptation") {
    TEST_CASE("gamma(2) closed form") {
        // integration by parts: E[log(1 + z)] = 1 for z ~ Gamma(2)
        CHECK_NEAR(ra_capacity(*make_gamma_diversity(2), 1.0).capacity_nats, 1.0, 1e-10);
        // high-precision reference for S = 10
        CHECK_NEAR(ra_capacity(*make_gamma_diversity(2), 10.0).capacity_nats, 2.8131782902376065, 1e-9);
    }

    TEST_CASE("deterministic and low-SNR limits") {
        CHECK_NEAR(ra_capacity(*spike(3.0, 1e-3), 2.0).capacity_nats, std::log(7.0), 1e-7);
        const double S = 1e-9;
        for (const auto& d : {make_gamma_diversity(2), make_miso_multiuser(2, 2)}) {
            CHECK_REL(ra_capacity(*d, S).capacity_nats, S * d->mean(), 1e-6);
            CHECK(ra_capacity(*d, 5.0).capacity_nats <= awgn_capacity(*d, 5.0).capacity_nats);
        }
    }
}

TEST_SUITE("channel inversion") {
    TEST_CASE("reference values") {
        CHECK_NEAR(ci_capacity(*make_gamma_diversity(2), 1.0).capacity_nats, std::numbers::ln2, 1e-15);
        CHECK_NEAR(ci_capacity(*make_max_exponential(2), 1.0).capacity_nats,
                   std::log1p(1.0 / (2.0 * std::numbers::ln2)), 1e-12);
    }

    TEST_CASE("A2 violation is degenerate, not an error") {
        const auto r = ci_capacity(*make_gamma_diversity(1), 1.0);
        CHECK(r.capacity_nats == 0.0);
        CHECK(r.degenerate);
    }
}

TEST_SUITE("truncated inversion") {
    TEST_CASE("peak power ratio") {
        auto g2 = make_gamma_diversity(2);
        // z_t -> 0 with A2: D_max z_t -> 1 / E[1/z] = 1
        CHECK_NEAR(tci_dmax(*g2, 1e-7) * 1e-7, 1.0, 1e-6);
        CHECK_NEAR(tci_dmax(*spike(4.0, 1e-3), 2.0), 2.0, 1e-6);
        for (double zt : {0.1, 1.0, 3.0}) {
            const double d = tci_dmax(*g2, zt);
            CHECK(d > 1.0);
            CHECK_NEAR(tci_average_power(*g2, zt, d), 1.0, 1e-9);
        }
        CHECK_THROWS_AS(tci_dmax(*g2, 0.0), DomainError);
        CHECK_THROWS_AS(tci_dmax(*spike(4.0, 1e-3), 5.0), DomainError);
    }

    TEST_CASE("zero-threshold limit is channel inversion") {
        auto d = make_miso_multiuser(2, 2);
        CHECK_NEAR(tci_capacity(*d, 10.0, 1e-9).capacity_nats, ci_capacity(*d, 10.0).capacity_nats, 1e-7);
    }

    TEST_CASE("works without A2") {
        auto d = make_gamma_diversity(1);
        const auto r = tci_capacity(*d, 10.0, 0.5);
        CHECK(r.capacity_nats > 0.0);
        CHECK(std::abs(*r.power_residual) < 1e-9);
    }

    TEST_CASE("low-SNR slope by finite difference") {
        auto d = make_gamma_diversity(2);
        const double zt = 1.0;
        const double S = 1e-9;
        const double h = 1e-3 * S;
        const double fd = (tci_capacity(*d, S + h, zt).capacity_nats - tci_capacity(*d, S - h, zt).capacity_nats) / (2.0 * h);
        const double formula = d->survival(zt) / d->tail_inverse_integral(zt);
        CHECK_REL(fd, formula, 1e-5);
    }

    TEST_CASE("optimized threshold") {
        auto d = make_miso_multiuser(2, 2);
        double previous = inf;
        for (double db : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
            const auto opt = tci_optimize(*d, db_to_linear(db));
            CHECK(opt.threshold.z_t < previous);
            previous = opt.threshold.z_t;
            CHECK(std::abs(opt.threshold.residual) < 1e-8);
        }
        const auto opt = tci_optimize(*d, 10.0);
        for (double zt : {0.5, 1.0, 2.0}) {
            CHECK(opt.capacity.capacity_nats >= tci_capacity(*d, 10.0, zt).capacity_nats);
        }
    }
}

TEST_SUITE("continuous-power truncated inversion") {
    TEST_CASE("reductions") {
        auto d = make_miso_multiuser(2, 2);
        const double S = 3.0;
        CHECK(ctci_capacity(*d, S, 0.0).capacity_nats == ci_capacity(*d, S).capacity_nats);
        CHECK_NEAR(ctci_capacity(*d, S, 60.0).capacity_nats, ra_capacity(*d, S).capacity_nats, 1e-8);
        CHECK_NEAR(ctci_capacity(*d, S, inf).capacity_nats, ra_capacity(*d, S).capacity_nats, 1e-15);
        CHECK_NEAR(ctci_dmax(*d, 60.0), 1.0, 1e-9);
        // S D_max z_t -> S / E[1/z] as z_t -> 0
        CHECK_NEAR(ctci_dmax(*d, 1e-9) * 1e-9, 1.0 / d->inverse_mean(), 1e-7);
        CHECK_THROWS_AS(ctci_dmax(*d, -1.0), DomainError);
    }

    TEST_CASE("power constraint") {
        auto d = make_gamma_diversity(2);
        for (double zt : {0.2, 1.0, 5.0}) {
            const double dm = ctci_dmax(*d, zt);
            CHECK_NEAR(ctci_average_power(*d, zt, dm), 1.0, 1e-9);
        }
    }

    TEST_CASE("capacity increases with the threshold") {
        auto d = make_gamma_diversity(2);
        const double c1 = ctci_capacity(*d, 1.0, 0.5).capacity_nats;
        const double c2 = ctci_capacity(*d, 1.0, 1.0).capacity_nats;
        const double c3 = ctci_capacity(*d, 1.0, 2.0).capacity_nats;
        CHECK(c1 <= c2);
        CHECK(c2 <= c3);
    }

    TEST_CASE("monotone in threshold at random powers") {
        test::Lcg rng(5);
        for (const auto& d : {make_gamma_diversity(1), make_max_exponential(3), make_frechet(3.0, 2)}) {
            for (int i = 0; i < 5; ++i) {
                const double S = std::pow(10.0, rng.uniform(-2.0, 4.0));
                double previous = -inf;
                for (double zt = 0.05; zt < 20.0; zt *= 1.7) {
                    const double c = ctci_capacity(*d, S, zt).capacity_nats;
                    CHECK(c >= previous - 1e-12);
                    previous = c;
                }
            }
        }
    }
}

TEST_SUITE("scheme properties") {
    TEST_CASE("ordering chain over a 61-point dB grid") {
        auto d = make_gamma_diversity(2);
        for (int i = 0; i <= 60; ++i) {
            const double S = db_to_linear(-20.0 + i);
            CAPTURE(S);
            const double ci = ci_capacity(*d, S).capacity_nats;
            const double ctci = ctci_capacity(*d, S, 1.0).capacity_nats;
            const double ra = ra_capacity(*d, S).capacity_nats;
            const double oa = oa_capacity(*d, S).capacity_nats;
            const double awgn = awgn_capacity(*d, S).capacity_nats;
            CHECK(ctci - ci >= -1e-9);
            CHECK(ra - ctci >= -1e-9);
            CHECK(oa - ra >= -1e-9);
            CHECK(awgn - ra >= -1e-9);
        }
    }

    TEST_CASE("scaling the channel is scaling the power") {
        auto base = make_miso_multiuser(2, 2);
        for (double c : {0.1, 10.0}) {
            auto scaled = make_scaled(base, c);
            const double S = 2.0;
            CHECK_NEAR(ra_capacity(*scaled, S).capacity_nats, ra_capacity(*base, c * S).capacity_nats, 1e-9);
            CHECK_NEAR(oa_capacity(*scaled, S).capacity_nats, oa_capacity(*base, c * S).capacity_nats, 1e-9);
            CHECK_NEAR(ci_capacity(*scaled, S).capacity_nats, ci_capacity(*base, c * S).capacity_nats, 1e-9);
            CHECK_NEAR(awgn_capacity(*scaled, S).capacity_nats, awgn_capacity(*base, c * S).capacity_nats, 1e-9);
            // thresholds are in z units, so they scale with the channel
            CHECK_NEAR(tci_capacity(*scaled, S, c * 1.5).capacity_nats, tci_capacity(*base, c * S, 1.5).capacity_nats, 1e-9);
            CHECK_NEAR(ctci_capacity(*scaled, S, c * 1.5).capacity_nats, ctci_capacity(*base, c * S, 1.5).capacity_nats, 1e-9);
        }
    }

    TEST_CASE("scheme names round-trip") {
        for (Scheme s : {Scheme::awgn, Scheme::oa, Scheme::ra, Scheme::ci, Scheme::tci, Scheme::ctci}) {
            CHECK(parse_scheme(to_string(s)) == s);
        }
        CHECK_FALSE(parse_scheme("bogus").has_value());
    }
}
