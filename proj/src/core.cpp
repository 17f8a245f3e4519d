#include "multimin/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "multimin/errors.hpp"

namespace multimin {

BoxDomain::BoxDomain(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() == 0 || lower.size() != upper.size()) {
        throw DomainError("BoxDomain: bounds must be non-empty and equal length");
    }
    for (int j = 0; j < p(); ++j) {
        if (!(lower[j] < upper[j])) {
            throw DomainError("BoxDomain: lower[j] < upper[j] required");
        }
    }
}

bool BoxDomain::contains(const Vec& x) const {
    if (x.size() != lower.size()) return false;
    for (int j = 0; j < p(); ++j) {
        if (std::isnan(x[j]) || x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
}

EvaluatedDesign::EvaluatedDesign(Design d, Vec y)
    : design(std::move(d)), responses(std::move(y)) {
    if (design.n() == 0 || responses.size() != design.n()) {
        throw Error("EvaluatedDesign: responses must match design size");
    }
    if (!responses.allFinite()) {
        throw Error("EvaluatedDesign: responses must be finite");
    }
    incumbent_index = 0;
    for (int i = 1; i < design.n(); ++i) {
        if (responses[i] < responses[incumbent_index]) incumbent_index = i;
    }
}

void EvaluatedDesign::append(Vec x, double y) {
    if (!std::isfinite(y)) throw Error("EvaluatedDesign: responses must be finite");
    design.points.push_back(std::move(x));
    responses.conservativeResize(responses.size() + 1);
    responses[responses.size() - 1] = y;
    if (incumbent_index < 0 || y < responses[incumbent_index]) {
        incumbent_index = static_cast<int>(responses.size()) - 1;
    }
}

Design lhs_sample(const BoxDomain& domain, int n, RandomStream& stream) {
    if (n < 1) throw Error("lhs_sample: n must be >= 1");
    const int p = domain.p();
    Design d;
    d.points.assign(n, Vec(p));
    std::vector<int> perm(n);
    for (int j = 0; j < p; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        stream.shuffle(perm);
        for (int i = 0; i < n; ++i) {
            const double u = stream.uniform01();
            const double z = (perm[i] + u) / n;
            d.points[i][j] = domain.lower[j] + domain.width(j) * z;
        }
    }
    return d;
}

Vec normalize(const BoxDomain& domain, const Vec& x) {
    if (!domain.contains(x)) {
        throw DomainError("normalize: point outside domain");
    }
    Vec z(domain.p());
    for (int j = 0; j < domain.p(); ++j) {
        z[j] = (x[j] - domain.lower[j]) / domain.width(j);
    }
    return z;
}

Vec denormalize(const BoxDomain& domain, const Vec& z) {
    if (z.size() != domain.p()) throw DomainError("denormalize: dimension mismatch");
    for (int j = 0; j < domain.p(); ++j) {
        if (std::isnan(z[j]) || z[j] < 0.0 || z[j] > 1.0) {
            throw DomainError("denormalize: point outside unit cube");
        }
    }
    Vec x(domain.p());
    for (int j = 0; j < domain.p(); ++j) {
        x[j] = domain.lower[j] + domain.width(j) * z[j];
    }
    return x;
}

}  // namespace multimin
