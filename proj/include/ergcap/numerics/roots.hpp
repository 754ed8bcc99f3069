#pragma once

#include <functional>

namespace ergcap::numerics {

struct Bracket {
    double lo;
    double hi;
};

struct RootResult {
    double root = 0.0;
    double value = 0.0;  // g(root)
    int iterations = 0;
};

/// Brent-Dekker root finder with a bisection safeguard. Requires a sign change
/// over the bracket (BracketError otherwise) and stops once the enclosing
/// interval is narrower than tol, or g hits zero exactly.
RootResult find_root_monotone(const std::function<double(double)>& g, Bracket bracket,
                              double tol = 1e-12);

enum class GridSpacing { linear, logarithmic };

struct MaximizeOptions {
    int grid_points = 64;
    GridSpacing spacing = GridSpacing::linear;
};

struct MaximizeResult {
    double argmax = 0.0;
    double max = 0.0;
};

/// Golden-section maximization seeded by a coarse grid scan over the bracket.
/// The scan picks the first (smallest) grid point attaining the largest value
/// and golden section then refines inside its two neighbouring cells. The
/// returned value is never below h at either bracket end. With a logarithmic
/// grid, tol applies to log(x), i.e. it is a relative tolerance on the argmax.
MaximizeResult maximize_unimodal(const std::function<double(double)>& h, Bracket bracket,
                                 double tol = 1e-10, MaximizeOptions opts = {});

}  // namespace ergcap::numerics
