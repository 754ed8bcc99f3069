#pragma once

namespace ergcap::numerics {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Argument domains are checked; violations throw DomainError.
double digamma(double x);
double gamma_fn(double x);
double log_gamma(double x);
/// P(n, z) = gamma(n, z) / Gamma(n).
double reg_lower_inc_gamma(double n, double z);
/// Q(n, z) = 1 - P(n, z), computed directly so the upper tail keeps its
/// relative precision.
double reg_upper_inc_gamma(double n, double z);

}  // namespace ergcap::numerics
