#include "multimin/mbo.hpp"

#include <chrono>

namespace multimin {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

MboResult run(const MboConfig& config) {
    if (config.n_init < 2) throw Error("mbo: n_init must be >= 2");
    if (config.n_seq < 0) throw Error("mbo: n_seq must be >= 0");
    const ObjectiveFunction& fn = config.objective;
    RandomStream stream(config.seed);

    Design init = lhs_sample(fn.domain, config.n_init, stream);
    Vec y(config.n_init);
    for (int i = 0; i < config.n_init; ++i) y[i] = evaluate(fn, init.points[i]);
    EvaluatedDesign evaluated(std::move(init), std::move(y));

    MboTrace trace;
    trace.records.reserve(config.n_seq);

    auto fit_or_abort = [&](const char* where) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            KrigingModel m = fit(fn.domain, evaluated, config.surrogate, stream);
            return std::make_pair(std::move(m), seconds_since(t0));
        } catch (const FitFailureError& e) {
            throw MboAbortError(std::string("mbo: surrogate fit failed at ") + where +
                                    ": " + e.what(),
                                trace, evaluated.n());
        }
    };

    for (int t = 1; t <= config.n_seq; ++t) {
        auto [model, fit_secs] = fit_or_abort("sequential iteration");
        Vec x_next = propose(model, evaluated, config.criterion, stream);

        // Score of the accepted proposal, for the trace.
        CriterionContext ctx;
        ctx.ystar = evaluated.incumbent_value();
        ctx.ymax = evaluated.max_response();
        ctx.s_p = quantile_sd(ctx.ystar, ctx.ymax, config.criterion.p_q);
        double crit_value;
        const Prediction pr = model.predict(x_next);
        switch (config.criterion.variant) {
            case Criterion::ei:
                crit_value = expected_improvement(pr.mean, pr.sd, ctx.ystar);
                break;
            case Criterion::lcb:
                crit_value = lcb(pr.mean, pr.sd, config.criterion.lambda_lcb);
                break;
            case Criterion::se:
                crit_value = se(pr.sd);
                break;
            case Criterion::geilm:
                crit_value = geilm(pr.mean, pr.sd, model.mean_gradient(x_next), ctx,
                                   config.criterion.lambda_g);
                break;
            default:
                crit_value = 0.0;
        }

        const double y_next = evaluate(fn, x_next);
        evaluated.append(x_next, y_next);
        trace.records.push_back(MboIterationRecord{
            t, x_next, y_next, evaluated.incumbent_value(), crit_value, fit_secs});
    }

    auto [final_model, final_secs] = fit_or_abort("final refit");
    (void)final_secs;
    return MboResult{std::move(evaluated), std::move(final_model), std::move(trace)};
}

}  // namespace multimin
