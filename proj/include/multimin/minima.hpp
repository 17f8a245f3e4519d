#pragma once

#include <vector>

#include "multimin/core.hpp"
#include "multimin/optim.hpp"

namespace multimin {

// Multistart sample size n = round(200^(log₃(p+2))).
int sample_size(int p);

struct ExtractResult {
    std::vector<DescentResult> kept;  // converged, interior
    int skipped_boundary = 0;         // converged but within τ_b of a bound
    int non_converged = 0;
};

// Draws an LHS of size n, descends from every point with minimize(), drops
// non-converged results (counted) and results with any coordinate within
// τ_b = 1e−6·(upper[j]−lower[j]) of a bound (counted).
ExtractResult extract(const ValueGrad& field, const BoxDomain& domain, int n,
                      RandomStream& stream, const DescentOptions& opts = {});

struct Cluster {
    Vec representative;  // lowest-value member
    double value;
    int members;
};

struct MinimaSet {
    std::vector<Cluster> clusters;  // sorted ascending by value
    int skipped_boundary = 0;
    int raw_converged = 0;
};

// Single-linkage agglomeration under Chebyshev distance with threshold δ:
// two points share a cluster iff a chain of pairwise distances ≤ δ connects
// them. Exact; representatives of distinct clusters are > δ apart.
MinimaSet agglomerate(const std::vector<DescentResult>& results, double delta);

}  // namespace multimin
