#include "ergcap/numerics/special.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "ergcap/error.hpp"

namespace ergcap::numerics {

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
    return boost::math::digamma(x);
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn: requires x > 0");
    return boost::math::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
    return boost::math::lgamma(x);
}

double reg_lower_inc_gamma(double n, double z) {
    if (!(n > 0.0) || !(z >= 0.0)) throw DomainError("reg_lower_inc_gamma: requires n > 0, z >= 0");
    if (std::isinf(z)) return 1.0;
    return boost::math::gamma_p(n, z);
}

double reg_upper_inc_gamma(double n, double z) {
    if (!(n > 0.0) || !(z >= 0.0)) throw DomainError("reg_upper_inc_gamma: requires n > 0, z >= 0");
    if (std::isinf(z)) return 0.0;
    return boost::math::gamma_q(n, z);
}

}  // namespace ergcap::numerics
