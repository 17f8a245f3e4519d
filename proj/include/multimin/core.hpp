#pragma once

#include <Eigen/Dense>
#include <vector>

#include "multimin/random.hpp"

namespace multimin {

using Vec = Eigen::VectorXd;

// Box domain [lower, upper] ⊂ ℝᵖ with strict per-axis bounds.
struct BoxDomain {
    Vec lower;
    Vec upper;

    BoxDomain(Vec lo, Vec hi);

    int p() const { return static_cast<int>(lower.size()); }
    double width(int j) const { return upper[j] - lower[j]; }
    bool contains(const Vec& x) const;
};

// Ordered list of points, all inside the associated domain.
struct Design {
    std::vector<Vec> points;

    int n() const { return static_cast<int>(points.size()); }
};

// A design together with its responses and the incumbent (lowest response,
// ties broken by lowest index).
struct EvaluatedDesign {
    Design design;
    Vec responses;
    int incumbent_index = -1;

    EvaluatedDesign() = default;
    EvaluatedDesign(Design d, Vec y);

    double incumbent_value() const { return responses[incumbent_index]; }
    const Vec& incumbent_point() const { return design.points[incumbent_index]; }
    double max_response() const { return responses.maxCoeff(); }
    int n() const { return design.n(); }

    // Appends one evaluated point, updating the incumbent.
    void append(Vec x, double y);
};

// Latin Hypercube Sample: for each dimension an independent random stratum
// permutation with uniform jitter inside each stratum (no maximin step).
// Draw order per dimension: the permutation's shuffle draws, then n jitters.
Design lhs_sample(const BoxDomain& domain, int n, RandomStream& stream);

// Affine map onto [0,1]ᵖ and its inverse. Both throw DomainError when the
// input lies outside the respective box.
Vec normalize(const BoxDomain& domain, const Vec& x);
Vec denormalize(const BoxDomain& domain, const Vec& z);

}  // namespace multimin
