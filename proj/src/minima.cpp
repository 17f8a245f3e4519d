#include "multimin/minima.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multimin/errors.hpp"

namespace multimin {

int sample_size(int p) {
    if (p < 1) throw Error("sample_size: p must be >= 1");
    const double e = std::log(static_cast<double>(p) + 2.0) / std::log(3.0);
    return static_cast<int>(std::llround(std::pow(200.0, e)));
}

ExtractResult extract(const ValueGrad& field, const BoxDomain& domain, int n,
                      RandomStream& stream, const DescentOptions& opts) {
    constexpr double kBoundaryTolRel = 1e-6;
    Design starts = lhs_sample(domain, n, stream);
    ExtractResult out;
    out.kept.reserve(n);
    for (const auto& x0 : starts.points) {
        DescentResult r;
        try {
            r = minimize(field, x0, domain, opts);
        } catch (const NumericFailureError&) {
            ++out.non_converged;
            continue;
        }
        if (!r.converged) {
            ++out.non_converged;
            continue;
        }
        bool boundary = false;
        for (int j = 0; j < domain.p() && !boundary; ++j) {
            const double tol = kBoundaryTolRel * domain.width(j);
            boundary = (r.x[j] - domain.lower[j] < tol) ||
                       (domain.upper[j] - r.x[j] < tol);
        }
        if (boundary) {
            ++out.skipped_boundary;
            continue;
        }
        out.kept.push_back(std::move(r));
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Exact single-linkage under Chebyshev distance. A gap > δ in any single
// coordinate separates clusters (a chain crossing it would need a link with
// that coordinate difference > δ), so the index set is recursively split at
// such gaps; surviving blocks are resolved by a sorted sweep: only pairs
// within δ along the sweep axis can be within Chebyshev δ.
class Agglomerator {
public:
    Agglomerator(const std::vector<DescentResult>& results, double delta)
        : results_(results), delta_(delta), uf_(static_cast<int>(results.size())) {}

    UnionFind run() {
        std::vector<int> all(results_.size());
        std::iota(all.begin(), all.end(), 0);
        if (!all.empty()) split(all, 0);
        return std::move(uf_);
    }

private:
    void split(std::vector<int>& idx, int depth) {
        const int p = static_cast<int>(results_[idx[0]].x.size());
        if (static_cast<int>(idx.size()) > 1 && depth < 8 * p) {
            for (int j = 0; j < p; ++j) {
                std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                    return results_[a].x[j] < results_[b].x[j];
                });
                for (std::size_t i = 1; i < idx.size(); ++i) {
                    if (results_[idx[i]].x[j] - results_[idx[i - 1]].x[j] > delta_) {
                        std::vector<int> left(idx.begin(), idx.begin() + i);
                        std::vector<int> right(idx.begin() + i, idx.end());
                        split(left, depth + 1);
                        split(right, depth + 1);
                        return;
                    }
                }
            }
        }
        sweep(idx);
    }

    void sweep(std::vector<int>& idx) {
        if (idx.size() < 2) return;
        const int p = static_cast<int>(results_[idx[0]].x.size());
        // Sweep along the axis with the largest spread to keep windows small.
        int axis = 0;
        double best_spread = -1.0;
        for (int j = 0; j < p; ++j) {
            auto [lo, hi] = std::minmax_element(idx.begin(), idx.end(), [&](int a, int b) {
                return results_[a].x[j] < results_[b].x[j];
            });
            const double spread = results_[*hi].x[j] - results_[*lo].x[j];
            if (spread > best_spread) {
                best_spread = spread;
                axis = j;
            }
        }
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return results_[a].x[axis] < results_[b].x[axis];
        });
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t k = i + 1; k < idx.size(); ++k) {
                if (results_[idx[k]].x[axis] - results_[idx[i]].x[axis] > delta_) break;
                const double d =
                    (results_[idx[i]].x - results_[idx[k]].x).cwiseAbs().maxCoeff();
                if (d <= delta_) uf_.unite(idx[i], idx[k]);
            }
        }
    }

    const std::vector<DescentResult>& results_;
    double delta_;
    UnionFind uf_;
};

}  // namespace

MinimaSet agglomerate(const std::vector<DescentResult>& results, double delta) {
    if (delta <= 0.0) throw Error("agglomerate: delta must be > 0");
    MinimaSet out;
    out.raw_converged = static_cast<int>(results.size());
    if (results.empty()) return out;

    UnionFind uf = Agglomerator(results, delta).run();

    std::vector<int> root_to_cluster(results.size(), -1);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const int root = uf.find(static_cast<int>(i));
        int& c = root_to_cluster[root];
        if (c < 0) {
            c = static_cast<int>(out.clusters.size());
            out.clusters.push_back(Cluster{results[i].x, results[i].f, 1});
        } else {
            auto& cl = out.clusters[c];
            ++cl.members;
            if (results[i].f < cl.value) {
                cl.value = results[i].f;
                cl.representative = results[i].x;
            }
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.value < b.value; });
    return out;
}

}  // namespace multimin
