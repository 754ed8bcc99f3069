#pragma once

#include "ergcap/distributions.hpp"

namespace ergcap::detail {

/// Confirms unit mass by quadrature before a distribution is handed out.
DistributionPtr checked(DistributionPtr dist);

}  // namespace ergcap::detail
