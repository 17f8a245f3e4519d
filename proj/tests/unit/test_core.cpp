#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "multimin/core.hpp"
#include "multimin/errors.hpp"
#include "multimin/random.hpp"

using multimin::BoxDomain;
using multimin::Design;
using multimin::DomainError;
using multimin::EvaluatedDesign;
using multimin::lhs_sample;
using multimin::RandomStream;
using multimin::Vec;

namespace {

Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

}  // namespace

TEST_CASE("box domain rejects degenerate axes") {
    CHECK_THROWS_AS(BoxDomain(vec({0.0}), vec({0.0})), multimin::Error);
    CHECK_THROWS_AS(BoxDomain(vec({1.0}), vec({0.0})), multimin::Error);
    CHECK_THROWS_AS(BoxDomain(Vec(0), Vec(0)), multimin::Error);
    CHECK_THROWS_AS(BoxDomain(vec({0.0, 0.0}), vec({1.0})), multimin::Error);
    const BoxDomain d(vec({-5.0, 0.0}), vec({10.0, 15.0}));
    CHECK(d.p() == 2);
    CHECK(d.width(0) == 15.0);
    CHECK(d.width(1) == 15.0);
}

TEST_CASE("contains is inclusive and NaN-aware") {
    const BoxDomain d(vec({0.0}), vec({1.0}));
    CHECK(d.contains(vec({0.0})));
    CHECK(d.contains(vec({1.0})));
    CHECK_FALSE(d.contains(vec({1.0 + 1e-12})));
    CHECK_FALSE(d.contains(vec({std::nan("")})));
}

TEST_CASE("normalize endpoints and midpoint") {
    const BoxDomain square(vec({0.0, 0.0}), vec({10.0, 10.0}));
    Vec z = multimin::normalize(square, vec({0.0, 10.0}));
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 1.0);

    const BoxDomain branin(vec({-5.0, 0.0}), vec({10.0, 15.0}));
    z = multimin::normalize(branin, vec({2.5, 7.5}));
    CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(multimin::normalize(square, vec({11.0, 0.0})), DomainError);
}

TEST_CASE("denormalize endpoints and domain errors") {
    const BoxDomain line(vec({0.0}), vec({10.0}));
    CHECK(multimin::denormalize(line, vec({0.5}))[0] == doctest::Approx(5.0));

    const BoxDomain branin(vec({-5.0, 0.0}), vec({10.0, 15.0}));
    const Vec x = multimin::denormalize(branin, vec({1.0, 0.0}));
    CHECK(x[0] == 10.0);
    CHECK(x[1] == 0.0);

    CHECK_THROWS_AS(multimin::denormalize(line, vec({1.5})), DomainError);
    CHECK_THROWS_AS(multimin::denormalize(line, vec({-0.5})), DomainError);
}

TEST_CASE("normalize/denormalize round-trip") {
    const BoxDomain d(vec({-5.0, 0.0, 2.0}), vec({10.0, 15.0, 2.5}));
    RandomStream stream(3);
    for (int i = 0; i < 50; ++i) {
        Vec x(3);
        for (int j = 0; j < 3; ++j) x[j] = stream.uniform(d.lower[j], d.upper[j]);
        const Vec back = multimin::denormalize(d, multimin::normalize(d, x));
        for (int j = 0; j < 3; ++j)
            CHECK(back[j] == doctest::Approx(x[j]).epsilon(1e-12));
    }
}

TEST_CASE("lhs n=1 spans the single stratum") {
    const BoxDomain d(vec({0.0}), vec({1.0}));
    RandomStream stream(1);
    const Design des = lhs_sample(d, 1, stream);
    REQUIRE(des.n() == 1);
    CHECK(des.points[0][0] >= 0.0);
    CHECK(des.points[0][0] <= 1.0);
}

TEST_CASE("lhs stratification: one point per axis stratum") {
    const BoxDomain d(vec({0.0, 0.0}), vec({10.0, 10.0}));
    RandomStream stream(17);
    const Design des = lhs_sample(d, 5, stream);
    REQUIRE(des.n() == 5);
    for (int j = 0; j < 2; ++j) {
        std::vector<int> occupancy(5, 0);
        for (const auto& pt : des.points) {
            const int stratum = std::min(4, static_cast<int>(pt[j] / 2.0));
            ++occupancy[stratum];
        }
        for (int c : occupancy) CHECK(c == 1);
    }
}

TEST_CASE("lhs occupancy histogram is all-ones for varied shapes") {
    for (int n : {3, 17, 64}) {
        for (int p : {1, 2, 4}) {
            const BoxDomain d(Vec::Constant(p, -2.0), Vec::Constant(p, 3.0));
            RandomStream stream(1000 + n * 10 + p);
            const Design des = lhs_sample(d, n, stream);
            for (int j = 0; j < p; ++j) {
                std::vector<int> occupancy(n, 0);
                for (const auto& pt : des.points) {
                    const double z = (pt[j] + 2.0) / 5.0;
                    const int stratum = std::min(n - 1, static_cast<int>(z * n));
                    ++occupancy[stratum];
                }
                for (int c : occupancy) CHECK(c == 1);
            }
            for (const auto& pt : des.points) CHECK(d.contains(pt));
        }
    }
}

TEST_CASE("lhs determinism and seed sensitivity") {
    const BoxDomain d(vec({0.0, 0.0}), vec({1.0, 1.0}));
    RandomStream a(5), b(5), c(6);
    const Design da = lhs_sample(d, 4, a);
    const Design db = lhs_sample(d, 4, b);
    const Design dc = lhs_sample(d, 4, c);
    bool identical = true, differs = false;
    for (int i = 0; i < 4; ++i) {
        identical &= (da.points[i].array() == db.points[i].array()).all();
        differs |= (da.points[i].array() != dc.points[i].array()).any();
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("evaluated design tracks the incumbent with lowest-index ties") {
    Design d;
    d.points = {vec({0.0}), vec({1.0}), vec({2.0}), vec({3.0})};
    EvaluatedDesign ed(d, vec({3.0, 1.0, 1.0, 2.0}));
    CHECK(ed.incumbent_index == 1);
    CHECK(ed.incumbent_value() == 1.0);
    CHECK(ed.incumbent_point()[0] == 1.0);
    CHECK(ed.max_response() == 3.0);

    ed.append(vec({4.0}), 0.5);
    CHECK(ed.n() == 5);
    CHECK(ed.incumbent_value() == 0.5);
    CHECK(ed.incumbent_point()[0] == 4.0);

    // Appending an equal value must not displace the earlier incumbent.
    ed.append(vec({5.0}), 0.5);
    CHECK(ed.incumbent_point()[0] == 4.0);
}

TEST_CASE("evaluated design rejects non-finite responses") {
    Design d;
    d.points = {vec({0.0}), vec({1.0})};
    CHECK_THROWS_AS(EvaluatedDesign(d, vec({1.0, std::nan("")})), multimin::Error);
    Vec inf(2);
    inf << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(EvaluatedDesign(d, inf), multimin::Error);
}
