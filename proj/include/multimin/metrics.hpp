#pragma once

#include <vector>

#include "multimin/core.hpp"

namespace multimin {

// maxⱼ |aⱼ − bⱼ|; throws on dimension mismatch.
double chebyshev(const Vec& a, const Vec& b);

// l/h; may exceed 1 (more clusters found than true minima).
double peak_ratio(int l, int h);

// Averaged Hausdorff distance of order r ≥ 1 between point sets: the max of
// the two directed terms mean(d_nn(u, S)^r)^(1/r) and mean(d_nn(s, U)^r)^(1/r)
// with Euclidean nearest-neighbor distances. Throws on empty sets.
double ahd(const std::vector<Vec>& U, const std::vector<Vec>& S, double r);

}  // namespace multimin
