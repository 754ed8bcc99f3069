#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "ergcap/cli.hpp"

namespace ergcap::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": '" + s + "' is not a number");
    }
    if (used != s.size()) throw UsageError(std::string(what) + ": '" + s + "' is not a number");
    return v;
}

const std::map<std::string_view, DistributionKind>& kind_names() {
    static const std::map<std::string_view, DistributionKind> names{
        {"gamma", DistributionKind::gamma_diversity},   {"gamma_diversity", DistributionKind::gamma_diversity},
        {"maxexp", DistributionKind::max_exponential},  {"max_exponential", DistributionKind::max_exponential},
        {"frechet", DistributionKind::frechet},         {"miso", DistributionKind::miso_multiuser},
        {"miso_multiuser", DistributionKind::miso_multiuser}, {"tab", DistributionKind::tabulated},
        {"tabulated", DistributionKind::tabulated},
    };
    return names;
}

std::vector<std::string_view> allowed_keys(DistributionKind kind) {
    switch (kind) {
        case DistributionKind::gamma_diversity: return {"N", "scale"};
        case DistributionKind::max_exponential: return {"K", "scale"};
        case DistributionKind::frechet: return {"alpha", "K", "scale"};
        case DistributionKind::miso_multiuser: return {"N", "K", "scale"};
        case DistributionKind::tabulated: return {"path", "scale"};
    }
    return {};
}

}  // namespace

DistributionSpec parse_distribution(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view kind_text = trim(text.substr(0, colon));
    const auto it = kind_names().find(kind_text);
    if (it == kind_names().end()) {
        throw UsageError("--dist: unknown distribution '" + std::string(kind_text) +
                         "' (expected gamma, maxexp, frechet, miso or tab)");
    }
    DistributionSpec spec;
    spec.kind = it->second;
    std::string path;
    if (colon != std::string_view::npos && !trim(text.substr(colon + 1)).empty()) {
        const auto keys = allowed_keys(spec.kind);
        for (auto item : split(text.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw UsageError("--dist: expected key=value, got '" + std::string(item) + "'");
            const std::string key(trim(item.substr(0, eq)));
            const std::string_view value = trim(item.substr(eq + 1));
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                throw UsageError("--dist: unknown key '" + key + "' for " + std::string(kind_text));
            }
            if (key == "path") {
                path = std::string(value);
                continue;
            }
            if (spec.parameters.count(key)) throw UsageError("--dist: duplicate key '" + key + "'");
            const double v = parse_number(value, "--dist " + key);
            if ((key == "N" || key == "K") && (v != std::floor(v) || v < 1.0)) {
                throw UsageError("--dist: " + key + " must be a positive integer");
            }
            spec.parameters[key] = v;
        }
    }
    auto require = [&](const char* key) {
        if (!spec.parameters.count(key)) {
            throw UsageError("--dist: " + std::string(kind_text) + " needs " + key + "=...");
        }
    };
    switch (spec.kind) {
        case DistributionKind::gamma_diversity: require("N"); break;
        case DistributionKind::max_exponential: require("K"); break;
        case DistributionKind::frechet: require("alpha"); break;
        case DistributionKind::miso_multiuser:
            require("N");
            require("K");
            break;
        case DistributionKind::tabulated:
            if (path.empty()) throw UsageError("--dist: tab needs path=...");
            spec.grid = read_tabulated_csv(path);
            break;
    }
    return spec;
}

SchemeSpec parse_scheme_spec(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = trim(text.substr(0, colon));
    const auto scheme = parse_scheme(name);
    if (!scheme) throw UsageError("unknown scheme '" + std::string(name) + "'");
    SchemeSpec spec;
    spec.scheme = *scheme;
    if (colon == std::string_view::npos) return spec;
    const std::string_view arg = trim(text.substr(colon + 1));
    if (spec.scheme != Scheme::tci && spec.scheme != Scheme::ctci) {
        throw UsageError("scheme '" + std::string(name) + "' takes no threshold");
    }
    if (arg == "opt") {
        if (spec.scheme != Scheme::tci) throw UsageError("only tci supports an optimized threshold");
        spec.optimize = true;
        return spec;
    }
    const double zt = parse_number(arg, "threshold");
    const bool ok = spec.scheme == Scheme::tci ? (zt > 0.0 && std::isfinite(zt)) : zt >= 0.0;
    if (!ok) throw UsageError("threshold out of range: '" + std::string(arg) + "'");
    spec.z_t = zt;
    return spec;
}

std::vector<SchemeSpec> parse_scheme_list(std::string_view text) {
    std::vector<SchemeSpec> out;
    if (trim(text).empty()) throw UsageError("scheme list is empty");
    for (auto item : split(text, ',')) {
        if (item.empty()) throw UsageError("empty entry in scheme list");
        out.push_back(parse_scheme_spec(item));
    }
    return out;
}

std::vector<double> parse_snr_grid(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        const double v = parse_number(parts[0], "--snr-db");
        if (!std::isfinite(v)) throw UsageError("--snr-db must be finite");
        return {v};
    }
    if (parts.size() != 3) throw UsageError("--snr-db: expected a value or start:stop:step");
    const double start = parse_number(parts[0], "--snr-db start");
    const double stop = parse_number(parts[1], "--snr-db stop");
    const double step = parse_number(parts[2], "--snr-db step");
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || !(start <= stop)) {
        throw UsageError("--snr-db: need start <= stop and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw UsageError("--snr-db: grid too large");
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

Units parse_units(std::string_view text) {
    if (text == "bits") return Units::bits;
    if (text == "nats") return Units::nats;
    throw UsageError("--units must be bits or nats");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double to_units(double nats, Units units) { return units == Units::bits ? nats / std::numbers::ln2 : nats; }

double threshold_in_z(const SchemeSpec& spec, double S) { return spec.gamma_units ? *spec.z_t / S : *spec.z_t; }

CapacityResult evaluate(const FadingDistribution& dist, const SchemeSpec& spec, double S) {
    switch (spec.scheme) {
        case Scheme::awgn: return awgn_capacity(dist, S);
        case Scheme::oa: return oa_capacity(dist, S);
        case Scheme::ra: return ra_capacity(dist, S);
        case Scheme::ci: return ci_capacity(dist, S);
        case Scheme::tci:
            if (spec.optimize) return tci_optimize(dist, S).capacity;
            if (!spec.z_t) throw UsageError("tci needs a threshold (tci:<z>, tci:opt or --zt)");
            return tci_capacity(dist, S, threshold_in_z(spec, S));
        case Scheme::ctci:
            if (!spec.z_t) throw UsageError("ctci needs a threshold (ctci:<z> or --zt)");
            return ctci_capacity(dist, S, threshold_in_z(spec, S));
    }
    throw UsageError("unknown scheme");
}

std::string format_fixed(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

}  // namespace ergcap::cli
