#include "multimin/metrics.hpp"

#include <cmath>
#include <limits>

#include "multimin/errors.hpp"

namespace multimin {

double chebyshev(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error("chebyshev: dimension mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

double peak_ratio(int l, int h) {
    if (h < 1) throw Error("peak_ratio: h must be >= 1");
    if (l < 0) throw Error("peak_ratio: l must be >= 0");
    return static_cast<double>(l) / static_cast<double>(h);
}

namespace {

double directed_term(const std::vector<Vec>& from, const std::vector<Vec>& to,
                     double r) {
    double acc = 0.0;
    for (const auto& x : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : to) {
            if (x.size() != y.size()) throw Error("ahd: dimension mismatch");
            best = std::min(best, (x - y).norm());
        }
        acc += std::pow(best, r);
    }
    return std::pow(acc / static_cast<double>(from.size()), 1.0 / r);
}

}  // namespace

double ahd(const std::vector<Vec>& U, const std::vector<Vec>& S, double r) {
    if (U.empty() || S.empty()) throw Error("ahd: empty point set");
    if (r < 1.0) throw Error("ahd: r must be >= 1");
    return std::max(directed_term(U, S, r), directed_term(S, U, r));
}

}  // namespace multimin
