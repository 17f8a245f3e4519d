#pragma once

#include <functional>

#include "multimin/core.hpp"

namespace multimin {

struct DescentOptions {
    int memory = 5;           // limited-memory correction pairs
    int max_iters = 200;
    double pg_tol = 1e-8;     // projected-gradient ∞-norm, normalized coords
    double f_rel_tol = 1e-10; // relative objective-change tolerance
    double c1 = 1e-4;         // sufficient-decrease constant
    double c2 = 0.9;          // curvature constant
    double bound_tol = 1e-12; // bound identification, normalized coords
    // Per-iteration displacement cap, ∞-norm in normalized coordinates
    // (non-positive disables). Keeps multistart descents inside their basin
    // of attraction: an uncapped quasi-Newton step happily crosses a ridge
    // into any lower region, which empties shallow basins.
    double max_step = 0.05;
};

struct DescentResult {
    Vec x;                           // original coordinates, feasible exactly
    double f = 0.0;
    double projected_gradient_norm = 0.0;  // normalized coords
    int iterations = 0;
    bool converged = false;
    bool hit_bound = false;
};

// Objective callback: returns f(x) and fills grad (same length as x), both
// in original coordinates.
using ValueGrad = std::function<double(const Vec& x, Vec& grad)>;

// Bounded limited-memory quasi-Newton minimization (L-BFGS-B scheme:
// gradient-projection Cauchy point, primal subspace step on the free
// variables, strong Wolfe line search). Operates internally on normalized
// [0,1]ᵖ coordinates so the tolerances are scale-free. Deterministic.
// Throws NumericFailureError (with the last finite iterate) if the field
// returns a non-finite value or gradient.
DescentResult minimize(const ValueGrad& field, const Vec& x0, const BoxDomain& bounds,
                       const DescentOptions& opts = {});

}  // namespace multimin
