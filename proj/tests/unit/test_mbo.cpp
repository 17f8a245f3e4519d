#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "multimin/mbo.hpp"
#include "multimin/objectives.hpp"

using multimin::Criterion;
using multimin::CriterionKind;
using multimin::MboConfig;
using multimin::MboResult;
using multimin::ObjectiveFunction;
using multimin::Vec;

namespace {

// Branin wrapped with an evaluation counter.
ObjectiveFunction counting_branin(int* counter) {
    ObjectiveFunction fn = multimin::lookup("Branin", 2).fn;
    auto base = fn.evaluator;
    fn.evaluator = [counter, base](const Vec& x) {
        ++*counter;
        return base(x);
    };
    return fn;
}

MboConfig config_for(ObjectiveFunction fn) {
    return MboConfig{std::move(fn), 9, 0, CriterionKind{}, multimin::KrigingConfig{}, 0};
}

}  // namespace

TEST_CASE("design-only run evaluates exactly n_init points and fits once") {
    int count = 0;
    MboConfig config = config_for(counting_branin(&count));
    config.n_init = 10;
    config.n_seq = 0;
    config.seed = 7;
    const MboResult res = multimin::run(config);
    CHECK(count == 10);
    CHECK(res.evaluated.n() == 10);
    CHECK(res.trace.records.empty());
    CHECK(res.model.n() == 10);
    const double m = res.model.predict_mean(res.evaluated.design.points[0]);
    CHECK(std::isfinite(m));
}

TEST_CASE("sequential run spends the exact evaluation budget") {
    for (Criterion variant : {Criterion::ei, Criterion::geilm}) {
        int count = 0;
        MboConfig config = config_for(counting_branin(&count));
        config.n_init = 9;
        config.n_seq = 4;
        config.criterion.variant = variant;
        config.seed = 11;
        const MboResult res = multimin::run(config);
        CHECK(count == 13);
        CHECK(res.evaluated.n() == 13);
        CHECK(static_cast<int>(res.evaluated.design.points.size()) == 13);
        CHECK(res.trace.records.size() == 4);
        CHECK(res.model.n() == 13);
    }
}

TEST_CASE("trace bookkeeping is consistent with the evaluated design") {
    MboConfig config = config_for(multimin::lookup("Branin", 2).fn);
    config.n_init = 9;
    config.n_seq = 5;
    config.criterion.variant = Criterion::ei;
    config.seed = 13;
    const MboResult res = multimin::run(config);
    REQUIRE(res.trace.records.size() == 5);

    double running_best = res.evaluated.responses.head(9).minCoeff();
    for (int i = 0; i < 5; ++i) {
        const auto& rec = res.trace.records[i];
        CHECK(rec.iteration == i + 1);
        CHECK(config.objective.domain.contains(rec.proposed));
        // The appended design row is the proposal and its response.
        const Vec& row = res.evaluated.design.points[9 + i];
        CHECK(rec.proposed[0] == row[0]);
        CHECK(rec.proposed[1] == row[1]);
        CHECK(rec.response == res.evaluated.responses[9 + i]);
        CHECK(rec.response ==
              doctest::Approx(config.objective.evaluator(rec.proposed)).epsilon(1e-15));
        // Incumbents are the running minimum, hence non-increasing.
        running_best = std::min(running_best, rec.response);
        CHECK(rec.incumbent == running_best);
        CHECK(std::isfinite(rec.criterion_value));
        CHECK(rec.fit_seconds >= 0.0);
    }
    CHECK(res.evaluated.incumbent_value() == running_best);
    CHECK(res.evaluated.incumbent_value() == res.evaluated.responses.minCoeff());
}

TEST_CASE("identical seeds reproduce the whole trajectory bitwise") {
    auto make = [] {
        MboConfig config = config_for(multimin::lookup("Himmelblau", 2).fn);
        config.n_init = 9;
        config.n_seq = 3;
        config.criterion.variant = Criterion::geilm;
        config.seed = 17;
        return multimin::run(config);
    };
    const MboResult a = make();
    const MboResult b = make();
    REQUIRE(a.evaluated.n() == b.evaluated.n());
    for (int i = 0; i < a.evaluated.n(); ++i) {
        CHECK(a.evaluated.responses[i] == b.evaluated.responses[i]);
        CHECK(a.evaluated.design.points[i][0] == b.evaluated.design.points[i][0]);
        CHECK(a.evaluated.design.points[i][1] == b.evaluated.design.points[i][1]);
    }
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        CHECK(a.trace.records[i].criterion_value == b.trace.records[i].criterion_value);
        CHECK(a.trace.records[i].incumbent == b.trace.records[i].incumbent);
    }
    CHECK(a.model.lengthscales()[0] == b.model.lengthscales()[0]);
    CHECK(a.model.nll() == b.model.nll());
}

TEST_CASE("different seeds give different initial designs") {
    MboConfig config = config_for(multimin::lookup("Branin", 2).fn);
    config.n_init = 9;
    config.n_seq = 0;
    config.seed = 1;
    const MboResult a = multimin::run(config);
    config.seed = 2;
    const MboResult b = multimin::run(config);
    bool any_diff = false;
    for (int i = 0; i < 9 && !any_diff; ++i) {
        any_diff = a.evaluated.design.points[i][0] != b.evaluated.design.points[i][0];
    }
    CHECK(any_diff);
}

TEST_CASE("config preconditions") {
    MboConfig config = config_for(multimin::lookup("Branin", 2).fn);
    config.n_init = 1;
    CHECK_THROWS_AS(multimin::run(config), multimin::Error);
    config.n_init = 9;
    config.n_seq = -1;
    CHECK_THROWS_AS(multimin::run(config), multimin::Error);
}
