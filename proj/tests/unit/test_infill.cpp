#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "doctest.h"
#include "multimin/core.hpp"
#include "multimin/errors.hpp"
#include "multimin/infill.hpp"
#include "multimin/metrics.hpp"
#include "multimin/objectives.hpp"
#include "multimin/random.hpp"
#include "multimin/surrogate.hpp"

using multimin::BoxDomain;
using multimin::Criterion;
using multimin::CriterionContext;
using multimin::CriterionKind;
using multimin::Design;
using multimin::EvaluatedDesign;
using multimin::KrigingConfig;
using multimin::KrigingModel;
using multimin::RandomStream;
using multimin::Vec;
using multimin::expected_improvement;
using multimin::geilm;
using multimin::quantile_sd;

namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

// Direct transcription of the closed form, as an independent oracle.
double ei_reference(double mu, double s, double ystar) {
    if (s == 0.0) return std::max(ystar - mu, 0.0);
    const double z = (ystar - mu) / s;
    return (ystar - mu) * boost::math::cdf(kStdNormal, z) +
           s * boost::math::pdf(kStdNormal, z);
}

Vec vec2(double a, double b) {
    Vec v(2);
    v[0] = a;
    v[1] = b;
    return v;
}

}  // namespace

TEST_CASE("expected improvement closed-form anchors") {
    // At mu == ystar with unit sd only the density term survives.
    CHECK(expected_improvement(0.0, 1.0, 0.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    // One-sd improvement: Phi(1) + phi(1).
    const double want = boost::math::cdf(kStdNormal, 1.0) +
                        boost::math::pdf(kStdNormal, 1.0);
    CHECK(expected_improvement(0.0, 1.0, 1.0) == doctest::Approx(want).epsilon(1e-14));
    CHECK(expected_improvement(0.0, 1.0, 1.0) == doctest::Approx(1.08332).epsilon(1e-5));
}

TEST_CASE("expected improvement frozen values") {
    CHECK(expected_improvement(0.3, 0.7, 0.1) ==
          doctest::Approx(0.19058103574135005).epsilon(1e-13));
    CHECK(expected_improvement(-1.2, 2.5, 0.4) ==
          doctest::Approx(1.9949175807016268).epsilon(1e-13));
    // Deep-tail case with ~2 digits of cancellation between the two terms.
    CHECK(expected_improvement(5.0, 1e-3, 4.99) ==
          doctest::Approx(7.4745602545893280e-28).epsilon(1e-9));
}

TEST_CASE("expected improvement degenerate and limiting behavior") {
    CHECK(expected_improvement(1.5, 0.0, 0.5) == 0.0);
    CHECK(expected_improvement(0.2, 0.0, 0.5) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(expected_improvement(0.5, 0.0, 0.5) == 0.0);
    // Far above the incumbent the value decays to zero.
    CHECK(expected_improvement(100.0, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(expected_improvement(0.0, -1.0, 0.0), multimin::Error);
}

TEST_CASE("expected improvement properties on random inputs") {
    RandomStream stream(21);
    for (int i = 0; i < 500; ++i) {
        const double mu = stream.uniform(-5.0, 5.0);
        const double s = stream.uniform(0.0, 3.0);
        const double ystar = stream.uniform(-5.0, 5.0);
        const double v = expected_improvement(mu, s, ystar);
        CHECK(v >= 0.0);
        CHECK(std::isfinite(v));
        CHECK(v == doctest::Approx(std::max(ei_reference(mu, s, ystar), 0.0))
                       .epsilon(1e-12)
                       .scale(1.0));
        // Monotone non-decreasing in s.
        const double v2 = expected_improvement(mu, s + 0.5, ystar);
        CHECK(v2 >= v - 1e-12);
    }
}

TEST_CASE("lower confidence bound") {
    CHECK(multimin::lcb(1.0, 0.5, 2.0) == 0.0);
    CHECK(multimin::lcb(3.25, 0.0, 7.0) == 3.25);
    CHECK(multimin::lcb(-1.0, 2.0, 1.0) == -3.0);
    CHECK_THROWS_AS(multimin::lcb(0.0, 1.0, 0.0), multimin::Error);
    CHECK_THROWS_AS(multimin::lcb(0.0, 1.0, -1.0), multimin::Error);
}

TEST_CASE("pure exploration criterion is the predictive sd") {
    CHECK(multimin::se(0.0) == 0.0);
    CHECK(multimin::se(2.5) == 2.5);
}

TEST_CASE("quantile sd matches the closed form") {
    // Phi^{-1}(0.001) frozen from high-precision evaluation.
    const double q001 = -3.0902323061678135;
    CHECK(quantile_sd(-1.0, 1.0, 0.001) ==
          doctest::Approx((-1.0 - 1.0) / q001).epsilon(1e-13));
    RandomStream stream(22);
    for (int i = 0; i < 200; ++i) {
        const double ymax = stream.uniform(-3.0, 3.0);
        const double ystar = ymax - stream.uniform(0.5, 4.0);
        const double p_q = stream.uniform(0.0005, 0.4);
        const double want = (ystar - ymax) / boost::math::quantile(kStdNormal, p_q);
        CHECK(quantile_sd(ystar, ymax, p_q) == doctest::Approx(want).epsilon(1e-12));
    }
    // Doubling the response range doubles the scale.
    CHECK(quantile_sd(-2.0, 2.0, 0.001) ==
          doctest::Approx(2.0 * quantile_sd(-1.0, 1.0, 0.001)).epsilon(1e-14));
}

TEST_CASE("quantile sd floor engages for flat responses") {
    CHECK(quantile_sd(5.0, 5.0, 0.001) == doctest::Approx(5e-8).epsilon(1e-14));
    CHECK(quantile_sd(0.5, 0.5, 0.001) == doctest::Approx(1e-8).epsilon(1e-14));
    CHECK(quantile_sd(-2.0, -2.0, 0.001) == doctest::Approx(2e-8).epsilon(1e-14));
    // Nearly-flat range below the floor also snaps to the floor.
    CHECK(quantile_sd(0.0, 1e-9, 0.001) == doctest::Approx(1e-8).epsilon(1e-14));
}

TEST_CASE("quantile sd rejects bad inputs") {
    CHECK_THROWS_AS(quantile_sd(-1.0, 1.0, 0.5), multimin::Error);
    CHECK_THROWS_AS(quantile_sd(-1.0, 1.0, 0.0), multimin::Error);
    CHECK_THROWS_AS(quantile_sd(-1.0, 1.0, -0.1), multimin::Error);
    CHECK_THROWS_AS(quantile_sd(1.0, 0.0, 0.001), multimin::Error);
}

TEST_CASE("gradient-scaled criterion equals half lambda s at a stationary incumbent") {
    // mu == ystar and zero gradient: Phi(0) * exp(0) leaves s * lambda / 2.
    const Vec zero = Vec::Zero(3);
    for (auto [s, lambda] : std::vector<std::pair<double, double>>{
             {1.0, 2.0}, {0.3, 5.0}, {2.5, 0.7}}) {
        const CriterionContext ctx{0.0, 1.0, 0.5};
        const double v = geilm(0.0, s, zero, ctx, lambda);
        CHECK(v == doctest::Approx(0.5 * lambda * s).epsilon(1e-12));
    }
}

TEST_CASE("gradient-scaled criterion frozen example") {
    const CriterionContext ctx{0.0, 1.0, 1.0};
    const double v = geilm(0.0, 1.0, vec2(0.5, -1.0), ctx, 2.0);
    CHECK(v == doctest::Approx(0.1353352832366127).epsilon(1e-13));
}

TEST_CASE("gradient-scaled criterion stays within its analytic bounds") {
    RandomStream stream(23);
    for (int i = 0; i < 10000; ++i) {
        const double mu = stream.uniform(-10.0, 10.0);
        const double s = stream.uniform(0.0, 5.0);
        const double lambda = stream.uniform(0.1, 6.0);
        CriterionContext ctx;
        ctx.ystar = stream.uniform(-5.0, 5.0);
        ctx.ymax = ctx.ystar + stream.uniform(0.0, 5.0);
        ctx.s_p = stream.uniform(1e-6, 3.0);
        Vec grad(2);
        grad[0] = stream.uniform(-4.0, 4.0);
        grad[1] = stream.uniform(-4.0, 4.0);
        const double v = geilm(mu, s, grad, ctx, lambda);
        CHECK(v >= 0.0);
        CHECK(v <= lambda * s + 1e-12);
    }
}

TEST_CASE("gradient-scaled criterion is strictly monotone in its penalties") {
    const CriterionContext ctx{0.0, 1.0, 0.7};
    // Decreasing in the gradient sup-norm.
    double prev = std::numeric_limits<double>::infinity();
    for (double g = 0.0; g <= 3.0; g += 0.25) {
        const double v = geilm(-0.1, 1.3, vec2(g, -0.5 * g), ctx, 2.0);
        CHECK(v < prev);
        prev = v;
    }
    // Decreasing in the predicted mean.
    prev = std::numeric_limits<double>::infinity();
    for (double mu = -2.0; mu <= 2.0; mu += 0.25) {
        const double v = geilm(mu, 1.3, vec2(0.2, 0.1), ctx, 2.0);
        CHECK(v < prev);
        prev = v;
    }
    // Linear in s for fixed everything else.
    const double base = geilm(0.3, 1.0, vec2(0.2, 0.1), ctx, 2.0);
    CHECK(geilm(0.3, 2.0, vec2(0.2, 0.1), ctx, 2.0) ==
          doctest::Approx(2.0 * base).epsilon(1e-14));
}

TEST_CASE("gradient-scaled criterion probability factor is scale invariant") {
    // Scaling responses by a > 0 scales ystar, mu, and s_p together, leaving
    // the probability factor unchanged.
    const double a = 3.7;
    const double s_p1 = quantile_sd(-1.0, 1.0, 0.001);
    const double s_p2 = quantile_sd(-a, a, 0.001);
    CHECK(s_p2 == doctest::Approx(a * s_p1).epsilon(1e-13));
    const Vec grad = vec2(0.4, -0.9);
    for (double mu : {-2.0, -0.3, 0.0, 0.8, 1.5}) {
        const CriterionContext c1{-1.0, 1.0, s_p1};
        const CriterionContext c2{-a, a, s_p2};
        const double v1 = geilm(mu, 1.1, grad, c1, 2.0);
        const double v2 = geilm(a * mu, 1.1, grad, c2, 2.0);
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
    }
}

TEST_CASE("gradient-scaled criterion rejects bad parameters") {
    const Vec zero = Vec::Zero(2);
    CHECK_THROWS_AS(geilm(0.0, 1.0, zero, CriterionContext{0.0, 1.0, 0.0}, 2.0),
                    multimin::Error);
    CHECK_THROWS_AS(geilm(0.0, 1.0, zero, CriterionContext{0.0, 1.0, 1.0}, 0.0),
                    multimin::Error);
}

TEST_CASE("exploration proposal moves away from a clustered design") {
    // Two near-center points on the unit square. The predictive sd vanishes
    // at the data and rises away from it, so the proposal must escape the
    // cluster and attain the global sd level.
    const BoxDomain box(vec2(0.0, 0.0), vec2(1.0, 1.0));
    Design d;
    d.points.push_back(vec2(0.5, 0.5));
    d.points.push_back(vec2(0.52, 0.5));
    Vec y(2);
    y[0] = 1.0;
    y[1] = 1.1;
    const EvaluatedDesign ed(d, y);
    RandomStream fit_stream(24);
    const KrigingModel model = multimin::fit(box, ed, KrigingConfig{}, fit_stream);
    CriterionKind kind;
    kind.variant = Criterion::se;
    RandomStream stream(25);
    const Vec x = multimin::propose(model, ed, kind, stream);
    REQUIRE(x.size() == 2);
    CHECK(box.contains(x));
    CHECK(multimin::chebyshev(x, vec2(0.5, 0.5)) >= 0.05);
    CHECK(multimin::chebyshev(x, vec2(0.52, 0.5)) >= 0.05);

    // The proposal matches the best sd found by a dense reference grid.
    double grid_max = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            grid_max = std::max(grid_max,
                                model.predict(vec2(i / 40.0, j / 40.0)).sd);
        }
    }
    CHECK(model.predict(x).sd >= 0.999 * grid_max);
    const double sd_at_data = std::max(model.predict(vec2(0.5, 0.5)).sd,
                                       model.predict(vec2(0.52, 0.5)).sd);
    CHECK(model.predict(x).sd > 100.0 * sd_at_data);
}

TEST_CASE("proposals are deterministic, feasible, and avoid design points") {
    const auto& entry = multimin::lookup("Branin", 2);
    RandomStream ds(26);
    Design d = multimin::lhs_sample(entry.fn.domain, 12, ds);
    Vec y(12);
    for (int i = 0; i < 12; ++i) y[i] = entry.fn.evaluator(d.points[i]);
    const EvaluatedDesign ed(d, y);
    RandomStream fs(27);
    const KrigingModel model = multimin::fit(entry.fn.domain, ed, KrigingConfig{}, fs);

    for (Criterion variant : {Criterion::ei, Criterion::geilm, Criterion::lcb,
                              Criterion::se}) {
        CriterionKind kind;
        kind.variant = variant;
        RandomStream s1(28), s2(28);
        const Vec x1 = multimin::propose(model, ed, kind, s1);
        const Vec x2 = multimin::propose(model, ed, kind, s2);
        CHECK(x1[0] == x2[0]);
        CHECK(x1[1] == x2[1]);
        CHECK(entry.fn.domain.contains(x1));
        const Vec z1 = multimin::normalize(entry.fn.domain, x1);
        for (const Vec& pt : ed.design.points) {
            const Vec zp = multimin::normalize(entry.fn.domain, pt);
            CHECK(multimin::chebyshev(z1, zp) > 1e-8);
        }
    }
}
