#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <thread>

#include "ergcap/asymptotics.hpp"
#include "ergcap/cli.hpp"
#include "ergcap/mc_oracle.hpp"
#include "ergcap/numerics/special.hpp"

namespace ergcap::cli {
namespace {

using json = nlohmann::ordered_json;
constexpr double inf = std::numeric_limits<double>::infinity();

// Non-finite values are spelled out since JSON has no literal for them.
json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string_view units_name(Units u) { return u == Units::bits ? "bits" : "nats"; }

// Runs task(i) for i in [0, n) on a small pool; rethrows the first failure in
// index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

json capacity_record(const CapacityResult& r, double snr_db, Units units) {
    json j;
    j["scheme"] = std::string(to_string(r.scheme));
    j["snr_db"] = snr_db;
    j["capacity"] = number(to_units(r.capacity_nats, units));
    j["units"] = std::string(units_name(units));
    j["z_t"] = optional_number(r.threshold);
    j["d_max"] = optional_number(r.d_max);
    j["power_residual"] = optional_number(r.power_residual);
    j["degenerate"] = r.degenerate;
    return j;
}

SchemeSpec with_threshold(SchemeSpec spec, const std::optional<double>& zt, const std::string& zt_units) {
    if (zt_units != "z" && zt_units != "gamma") throw UsageError("--zt-units must be z or gamma");
    if (zt && (spec.scheme == Scheme::tci || spec.scheme == Scheme::ctci) && !spec.z_t && !spec.optimize) {
        spec.z_t = *zt;
    }
    spec.gamma_units = zt_units == "gamma";
    return spec;
}

double single_snr(const std::string& text) {
    const auto grid = parse_snr_grid(text);
    if (grid.size() != 1) throw UsageError("--snr-db: expected a single value");
    return grid.front();
}

// ---- gaps ----

json gaps_record(const DistributionSpec& spec, const FadingDistribution& dist, Units units) {
    const auto r = gap_report(dist);
    json j;
    j["units"] = std::string(units_name(units));
    j["gap_oa_ra"] = number(to_units(r.gap_oa_ra, units));
    j["gap_awgn_oa"] = number(to_units(r.gap_awgn_oa, units));
    j["gap_oa_ci"] = number(to_units(r.gap_oa_ci, units));
    j["gap_awgn_ci"] = number(to_units(r.gap_awgn_ci, units));
    if (spec.kind == DistributionKind::gamma_diversity) {
        const int n = static_cast<int>(spec.parameters.at("N"));
        json c;
        if (n >= 2) {
            const auto g = space_diversity_gaps(n);
            c["gap_oa_ci"] = number(to_units(g.gap_oa_ci, units));
            c["gap_awgn_ci"] = number(to_units(g.gap_awgn_ci, units));
            c["expansion_oa_ci"] = number(to_units(g.expansion_oa_ci, units));
            c["expansion_awgn_ci"] = number(to_units(g.expansion_awgn_ci, units));
        } else {
            c["gap_oa_ci"] = "inf";
            c["gap_awgn_ci"] = "inf";
        }
        j["closed_form"] = c;
    } else if (spec.kind == DistributionKind::frechet) {
        const double a = spec.parameters.at("alpha");
        json c;
        c["gap_oa_ci"] = number(to_units(numerics::euler_gamma / a + numerics::log_gamma(1.0 + 1.0 / a), units));
        c["gap_awgn_ci"] =
            a > 1.0 ? number(to_units(numerics::log_gamma(1.0 - 1.0 / a) + numerics::log_gamma(1.0 + 1.0 / a), units))
                    : json("inf");
        j["closed_form"] = c;
    } else if (spec.kind == DistributionKind::max_exponential) {
        const int k = static_cast<int>(spec.parameters.at("K"));
        if (k >= 2) {
            json a;
            a["gap_awgn_ci"] = number(to_units(multiuser_gap_asymptotic(k).value, units));
            a["approximate"] = true;
            j["asymptotic"] = a;
        }
    }
    return j;
}

// ---- verify ----

struct Check {
    explicit Check(std::string n) : name(std::move(n)) {}
    std::string name;
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Thresholds used by the verification suite: {0.5, 1, 2} times a reference
// level inside the support.
std::vector<double> verify_thresholds(const FadingDistribution& dist) {
    double ref = dist.finite_mean() ? dist.mean() : 1.0;
    if (ref >= dist.support_sup()) ref = 0.5 * dist.support_sup();
    std::vector<double> out;
    for (double m : {0.5, 1.0, 2.0}) {
        if (m * ref < dist.support_sup()) out.push_back(m * ref);
    }
    return out;
}

std::vector<Check> run_checks(const FadingDistribution& dist, bool full, std::uint64_t samples, std::uint64_t seed) {
    std::vector<Check> checks;
    const auto zts = verify_thresholds(dist);
    const double ref = zts.size() > 1 ? zts[1] : zts.front();
    const double slack = 1e-9;

    {
        Check c{"gap_additivity"};
        const auto r = gap_report(dist);
        if (std::isfinite(r.gap_awgn_ci)) {
            const double err = std::abs(r.gap_awgn_oa + r.gap_oa_ci - r.gap_awgn_ci);
            c.pass = err <= 1e-10 && r.gap_awgn_oa >= -1e-12 && r.gap_oa_ci >= -1e-12;
            c.detail = "residual " + fmt(err);
        } else {
            c.pass = r.gap_awgn_oa >= -1e-12 || std::isinf(r.gap_awgn_oa);
            c.detail = "infinite gap";
        }
        checks.push_back(c);
    }

    {
        Check order{"ordering_chain"};
        Check power{"power_residuals"};
        double worst_power = 0.0;
        for (int db = -20; db <= 40; ++db) {
            const double S = db_to_linear(db);
            const auto oa = oa_capacity(dist, S);
            const double ra = ra_capacity(dist, S).capacity_nats;
            const double ci = ci_capacity(dist, S).capacity_nats;
            const double awgn = awgn_capacity(dist, S).capacity_nats;
            worst_power = std::max(worst_power, std::abs(*oa.power_residual));
            auto fail = [&](const std::string& what) {
                if (order.pass) order.detail = what + " at " + std::to_string(db) + " dB";
                order.pass = false;
            };
            if (ra > oa.capacity_nats + slack) fail("RA > OA");
            if (ra > awgn + slack) fail("RA > AWGN");
            for (double zt : zts) {
                const auto ctci = ctci_capacity(dist, S, zt);
                worst_power = std::max(worst_power, std::abs(*ctci.power_residual));
                if (ci > ctci.capacity_nats + slack) fail("CI > CTCI");
                if (ctci.capacity_nats > ra + slack) fail("CTCI > RA");
                const auto tci = tci_capacity(dist, S, zt);
                worst_power = std::max(worst_power, std::abs(*tci.power_residual));
            }
        }
        if (order.pass) order.detail = "61 points, -20..40 dB";
        power.pass = worst_power <= 1e-8;
        power.detail = "max |E[D]-1| " + fmt(worst_power);
        checks.push_back(order);
        checks.push_back(power);
    }

    {
        Check c{"prelog"};
        const double S = 1e6;
        auto expect = [&](const std::string& what, const CapacityFunction& f, double target) {
            const double v = prelog_numeric(f, S);
            if (std::abs(v - target) > 0.02) {
                if (c.pass) c.detail = what + " pre-log " + fmt(v) + " vs " + fmt(target);
                c.pass = false;
            }
        };
        expect("ra", [&](double s) { return ra_capacity(dist, s).capacity_nats; }, 1.0);
        if (dist.a2_holds()) expect("ci", [&](double s) { return ci_capacity(dist, s).capacity_nats; }, 1.0);
        expect("ctci", [&](double s) { return ctci_capacity(dist, s, ref).capacity_nats; }, 1.0);
        expect("tci", [&](double s) { return tci_capacity(dist, s, ref).capacity_nats; },
               prelog_analytic(dist.cdf(ref)));
        if (c.pass) c.detail = "S = 1e6";
        checks.push_back(c);
    }

    {
        Check c{"low_snr_slopes"};
        const double S = 1e-6;
        auto expect = [&](const std::string& what, const CapacityFunction& f, double target) {
            const double v = low_snr_slope_numeric(f, S);
            if (std::abs(v - target) > 0.01 * target) {
                if (c.pass) c.detail = what + " slope " + fmt(v) + " vs " + fmt(target);
                c.pass = false;
            }
        };
        if (dist.finite_mean()) {
            expect("awgn", [&](double s) { return awgn_capacity(dist, s).capacity_nats; }, dist.mean());
        }
        if (dist.a2_holds()) {
            expect("ci", [&](double s) { return ci_capacity(dist, s).capacity_nats; }, 1.0 / dist.inverse_mean());
        }
        expect("tci", [&](double s) { return tci_capacity(dist, s, ref).capacity_nats; },
               tci_low_snr_slope(dist, ref));
        expect("ctci", [&](double s) { return ctci_capacity(dist, s, ref).capacity_nats; },
               ctci_low_snr_slope(dist, ref));
        if (c.pass) c.detail = "S = 1e-6";
        checks.push_back(c);
    }

    if (full) {
        Check agree{"monte_carlo_agreement"};
        Check audit{"monte_carlo_power"};
        int cells = 0;
        int hits = 0;
        auto make = [](Scheme s, std::optional<double> z) {
            SchemeSpec sc;
            sc.scheme = s;
            sc.z_t = z;
            return sc;
        };
        std::vector<SchemeSpec> schemes{make(Scheme::oa, {}), make(Scheme::ra, {}), make(Scheme::tci, ref),
                                        make(Scheme::ctci, ref)};
        if (dist.a2_holds()) schemes.push_back(make(Scheme::ci, {}));
        for (const auto& sc : schemes) {
            for (double S : {0.1, 1.0, 10.0, 100.0}) {
                McParams p;
                p.z_t = sc.z_t;
                const auto est = mc_capacity(dist, sc.scheme, S, p, samples, seed);
                const double q = evaluate(dist, sc, S).capacity_nats;
                ++cells;
                if (std::abs(est.mean_nats - q) <= std::max(3.0 * est.std_error, 1e-12 * std::abs(q))) ++hits;
                if (sc.scheme != Scheme::ra && sc.scheme != Scheme::ci &&
                    std::abs(est.power_mean - 1.0) > 3.0 * est.power_std_error) {
                    if (audit.pass) audit.detail = std::string(to_string(sc.scheme)) + " at S=" + fmt(S);
                    audit.pass = false;
                }
            }
        }
        agree.pass = hits >= 0.95 * cells;
        agree.detail = std::to_string(hits) + "/" + std::to_string(cells) + " cells within 3 sigma";
        if (audit.pass) audit.detail = "E[D] within 3 sigma of 1";
        checks.push_back(agree);
        checks.push_back(audit);
    }
    return checks;
}

}  // namespace

void write_sweep_csv(const SweepSpec& spec, std::ostream& out) {
    if (spec.schemes.empty()) throw UsageError("scheme list is empty");
    const auto dist = make_distribution(spec.distribution);
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t n = spec.snr_grid_db.size() * n_schemes;
    std::vector<CapacityResult> results(n);
    parallel_for(n, [&](std::size_t i) {
        const double S = db_to_linear(spec.snr_grid_db[i / n_schemes]);
        results[i] = evaluate(*dist, spec.schemes[i % n_schemes], S);
    });
    out << "snr_db,scheme,capacity,z_t,d_max\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = results[i];
        out << format_fixed(spec.snr_grid_db[i / n_schemes]) << ',' << to_string(r.scheme) << ','
            << format_fixed(to_units(r.capacity_nats, spec.units)) << ','
            << (r.threshold ? format_fixed(*r.threshold) : "") << ',' << (r.d_max ? format_fixed(*r.d_max) : "")
            << '\n';
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ergodic capacity of adaptive transmission over fading channels"};
    app.require_subcommand(1);

    std::string dist_text;
    std::string scheme_text;
    std::string snr_text = "0";
    std::optional<double> zt;
    std::string zt_units = "z";
    std::string units_text = "bits";
    std::string out_path;
    std::uint64_t seed = 1;
    std::uint64_t samples = 1000000;
    std::string level = "fast";

    auto add_dist = [&](CLI::App* sub) { sub->add_option("--dist", dist_text, "Distribution, e.g. miso:N=2,K=2")->required(); };
    auto add_units = [&](CLI::App* sub) {
        sub->add_option("--units", units_text, "bits or nats (default bits)");
    };

    auto* capacity = app.add_subcommand("capacity", "Capacity of one scheme at one SNR");
    add_dist(capacity);
    capacity->add_option("--scheme", scheme_text, "awgn, oa, ra, ci, tci:<z>|opt, ctci:<z>")->required();
    capacity->add_option("--snr-db", snr_text, "Average SNR in dB");
    capacity->add_option("--zt", zt, "Threshold for tci/ctci");
    capacity->add_option("--zt-units", zt_units, "Thresholds in z (default) or gamma = S z units");
    add_units(capacity);

    auto* sweep = app.add_subcommand("sweep", "Capacity over an SNR grid, written as CSV");
    add_dist(sweep);
    sweep->add_option("--schemes,--scheme", scheme_text, "Comma-separated scheme list")->required();
    sweep->add_option("--snr-db", snr_text, "start:stop:step in dB, or a single value")->required();
    sweep->add_option("--zt", zt, "Threshold for tci/ctci entries without one");
    sweep->add_option("--zt-units", zt_units, "Thresholds in z (default) or gamma = S z units");
    sweep->add_option("--out", out_path, "Output CSV path (default stdout)");
    add_units(sweep);

    auto* gaps = app.add_subcommand("gaps", "High-SNR capacity gaps");
    add_dist(gaps);
    add_units(gaps);

    auto* verify = app.add_subcommand("verify", "Run the invariant checks on a distribution");
    add_dist(verify);
    verify->add_option("--level", level, "fast or full (full adds Monte-Carlo checks)");
    verify->add_option("--seed", seed, "Monte-Carlo seed");
    verify->add_option("--samples", samples, "Monte-Carlo draws per cell");

    auto* mc = app.add_subcommand("mc", "Monte-Carlo estimate next to the quadrature value");
    add_dist(mc);
    mc->add_option("--scheme", scheme_text, "Scheme spec")->required();
    mc->add_option("--snr-db", snr_text, "Average SNR in dB");
    mc->add_option("--zt", zt, "Threshold for tci/ctci");
    mc->add_option("--zt-units", zt_units, "Thresholds in z (default) or gamma = S z units");
    mc->add_option("--seed", seed, "Random seed");
    mc->add_option("--samples", samples, "Number of draws");
    add_units(mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const Units units = parse_units(units_text);
        const DistributionSpec spec = parse_distribution(dist_text);
        const auto dist = make_distribution(spec);

        if (capacity->parsed()) {
            const auto scheme = with_threshold(parse_scheme_spec(scheme_text), zt, zt_units);
            const double db = single_snr(snr_text);
            out << capacity_record(evaluate(*dist, scheme, db_to_linear(db)), db, units).dump() << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            SweepSpec s;
            s.distribution = spec;
            for (const auto& sc : parse_scheme_list(scheme_text)) s.schemes.push_back(with_threshold(sc, zt, zt_units));
            s.snr_grid_db = parse_snr_grid(snr_text);
            s.units = units;
            s.output_path = out_path;
            if (out_path.empty()) {
                write_sweep_csv(s, out);
            } else {
                std::ofstream file(out_path, std::ios::binary);
                if (!file) throw UsageError("cannot write '" + out_path + "'");
                write_sweep_csv(s, file);
                if (!file) throw UsageError("write to '" + out_path + "' failed");
            }
            return 0;
        }
        if (gaps->parsed()) {
            out << gaps_record(spec, *dist, units).dump() << "\n";
            return 0;
        }
        if (verify->parsed()) {
            if (level != "fast" && level != "full") throw UsageError("--level must be fast or full");
            if (samples < 2) throw UsageError("--samples must be at least 2");
            const auto checks = run_checks(*dist, level == "full", samples, seed);
            json j;
            j["distribution"] = dist_text;
            j["level"] = level;
            bool all = true;
            json list = json::array();
            for (const auto& c : checks) {
                list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
                if (!c.pass) {
                    all = false;
                    err << "FAILED " << c.name << ": " << c.detail << "\n";
                }
            }
            j["checks"] = list;
            j["pass"] = all;
            out << j.dump() << "\n";
            return all ? 0 : 1;
        }
        if (mc->parsed()) {
            auto scheme = with_threshold(parse_scheme_spec(scheme_text), zt, zt_units);
            if (samples < 2) throw UsageError("--samples must be at least 2");
            const double db = single_snr(snr_text);
            const double S = db_to_linear(db);
            const auto q = evaluate(*dist, scheme, S);
            McParams p;
            p.z_t = scheme.optimize || scheme.z_t ? q.threshold : std::nullopt;
            if (scheme.scheme == Scheme::oa) p.oa_threshold = q.threshold;
            const auto est = mc_capacity(*dist, scheme.scheme, S, p, samples, seed);
            json j;
            j["scheme"] = std::string(to_string(scheme.scheme));
            j["snr_db"] = db;
            j["units"] = std::string(units_name(units));
            j["z_t"] = optional_number(q.threshold);
            j["quadrature"] = number(to_units(q.capacity_nats, units));
            j["mc_mean"] = number(to_units(est.mean_nats, units));
            j["mc_std_error"] = number(to_units(est.std_error, units));
            j["power_mean"] = number(est.power_mean);
            j["power_std_error"] = number(est.power_std_error);
            j["n_samples"] = est.n_samples;
            j["seed"] = est.seed;
            j["degenerate"] = est.degenerate;
            out << j.dump() << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace ergcap::cli
