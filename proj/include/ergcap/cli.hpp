#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergcap/distributions.hpp"
#include "ergcap/error.hpp"
#include "ergcap/schemes.hpp"

namespace ergcap::cli {

/// Malformed command-line input. Maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

enum class Units { bits, nats };

/// One scheme column of a sweep: `oa`, `tci:1.5`, `tci:opt`, `ctci:2`, ...
struct SchemeSpec {
    Scheme scheme = Scheme::awgn;
    std::optional<double> z_t;
    bool optimize = false;  // tci only
    /// z_t is an instantaneous-SNR threshold gamma_t; the z-unit threshold
    /// is gamma_t / S at each power.
    bool gamma_units = false;
};

/// Threshold of `spec` in z units at power S (spec.z_t must be set).
double threshold_in_z(const SchemeSpec& spec, double S);

struct SweepSpec {
    DistributionSpec distribution;
    std::vector<SchemeSpec> schemes;
    std::vector<double> snr_grid_db;
    Units units = Units::bits;
    std::string output_path;  // empty: stdout
};

/// `kind:key=val,...` with kind one of gamma, maxexp, frechet, miso, tab
/// (long names also accepted) and an optional `scale=c` on any kind.
DistributionSpec parse_distribution(std::string_view text);
SchemeSpec parse_scheme_spec(std::string_view text);
/// Comma-separated scheme specs; must be non-empty.
std::vector<SchemeSpec> parse_scheme_list(std::string_view text);
/// A single value, or `start:stop:step` with step > 0 and start <= stop.
std::vector<double> parse_snr_grid(std::string_view text);
Units parse_units(std::string_view text);

double db_to_linear(double db);
double to_units(double nats, Units units);

/// Capacity for one scheme spec at linear power S.
CapacityResult evaluate(const FadingDistribution& dist, const SchemeSpec& spec, double S);

/// Fixed six-decimal rendering used in CSV output; +inf renders as "inf".
std::string format_fixed(double value);

/// Evaluates the sweep (points in parallel) and writes the CSV rows in
/// grid-major, scheme-minor order.
void write_sweep_csv(const SweepSpec& spec, std::ostream& out);

/// Entry point of the `ergcap` tool. Returns the process exit code:
/// 0 success, 1 invariant failure, 2 usage or format error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergcap::cli
