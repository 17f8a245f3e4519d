#include "multimin/infill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "multimin/errors.hpp"
#include "multimin/optim.hpp"
#include "multimin/stats.hpp"

namespace multimin {

double expected_improvement(double mu, double s, double ystar) {
    if (s < 0.0) throw Error("expected_improvement: s must be >= 0");
    const double imp = ystar - mu;
    if (s == 0.0) return std::max(imp, 0.0);
    const double z = imp / s;
    const double v = imp * norm_cdf(z) + s * norm_pdf(z);
    return std::max(v, 0.0);  // clamp tiny negative round-off in the far tail
}

double lcb(double mu, double s, double lambda_lcb) {
    if (lambda_lcb <= 0.0) throw Error("lcb: lambda must be > 0");
    return mu - lambda_lcb * s;
}

double se(double s) {
    return s;
}

double quantile_sd(double ystar, double ymax, double p_q) {
    if (!(p_q > 0.0 && p_q < 0.5)) throw Error("quantile_sd: p_q must lie in (0, 0.5)");
    if (ystar > ymax) throw Error("quantile_sd: ystar must be <= ymax");
    const double floor_s = 1e-8 * std::max(1.0, std::fabs(ystar));
    const double s = (ystar - ymax) / norm_quantile(p_q);
    return std::max(s, floor_s);
}

double geilm(double mu, double s, const Vec& grad, const CriterionContext& ctx,
             double lambda_g) {
    if (ctx.s_p <= 0.0) throw Error("geilm: s_p must be > 0");
    if (lambda_g <= 0.0) throw Error("geilm: lambda_g must be > 0");
    const double gnorm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    return s * norm_cdf((ctx.ystar - mu) / ctx.s_p) * lambda_g *
           std::exp(-lambda_g * gnorm);
}

namespace {

// Score to MAXIMIZE for the active criterion (LCB is negated).
double criterion_score(const KrigingModel& model, const CriterionKind& kind,
                       const CriterionContext& ctx, const Vec& x) {
    const Prediction pr = model.predict(x);
    switch (kind.variant) {
        case Criterion::ei:
            return expected_improvement(pr.mean, pr.sd, ctx.ystar);
        case Criterion::lcb:
            return -lcb(pr.mean, pr.sd, kind.lambda_lcb);
        case Criterion::se:
            return se(pr.sd);
        case Criterion::geilm:
            return geilm(pr.mean, pr.sd, model.mean_gradient(x), ctx, kind.lambda_g);
    }
    return 0.0;
}

}  // namespace

Vec propose(const KrigingModel& model, const EvaluatedDesign& evaluated,
            const CriterionKind& kind, RandomStream& stream) {
    const BoxDomain& dom = model.domain();
    const int p = dom.p();
    CriterionContext ctx;
    ctx.ystar = evaluated.incumbent_value();
    ctx.ymax = evaluated.max_response();
    ctx.s_p = quantile_sd(ctx.ystar, ctx.ymax, kind.p_q);

    const int n_cand = 1000 * p;
    Design cands = lhs_sample(dom, n_cand, stream);
    std::vector<std::pair<double, int>> scored;
    scored.reserve(n_cand);
    double best_raw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_cand; ++i) {
        const double v = criterion_score(model, kind, ctx, cands.points[i]);
        if (std::isfinite(v)) {
            scored.emplace_back(v, i);
            best_raw = std::max(best_raw, v);
        }
    }
    if (scored.empty()) {
        throw ProposalFailureError("propose: criterion non-finite at all candidates");
    }

    const int n_top = std::min<int>(10, static_cast<int>(scored.size()));
    std::partial_sort(scored.begin(), scored.begin() + n_top, scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });

    // Negated criterion with central finite differences, step 1e−6 in
    // normalized units; the stencil shifts one-sided at the bounds.
    ValueGrad neg_field = [&](const Vec& x, Vec& g) {
        Vec xp = x, xm = x;
        for (int j = 0; j < p; ++j) {
            const double step = 1e-6 * dom.width(j);
            const double hi = std::min(x[j] + step, dom.upper[j]);
            const double lo = std::max(x[j] - step, dom.lower[j]);
            xp[j] = hi;
            xm[j] = lo;
            g[j] = -(criterion_score(model, kind, ctx, xp) -
                     criterion_score(model, kind, ctx, xm)) /
                   (hi - lo);
            xp[j] = x[j];
            xm[j] = x[j];
        }
        return -criterion_score(model, kind, ctx, x);
    };

    Vec best_x;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < n_top; ++t) {
        const Vec& x0 = cands.points[scored[t].second];
        Vec x_ref = x0;
        try {
            DescentResult r = minimize(neg_field, x0, dom);
            x_ref = r.x;
        } catch (const NumericFailureError&) {
            // Keep the raw candidate if refinement wandered into bad numbers.
        }
        const double v = criterion_score(model, kind, ctx, x_ref);
        const double v0 = scored[t].first;
        const double v_use = std::isfinite(v) && v >= v0 ? v : v0;
        const Vec& x_use = std::isfinite(v) && v >= v0 ? x_ref : x0;
        if (v_use > best_v) {
            best_v = v_use;
            best_x = x_use;
        }
    }

    // Reject proposals that collapse onto an existing design point.
    const Vec z_best = normalize(dom, best_x);
    for (const auto& pt : evaluated.design.points) {
        const Vec z_pt = normalize(dom, pt);
        if ((z_best - z_pt).cwiseAbs().maxCoeff() <= 1e-8) {
            return lhs_sample(dom, 1, stream).points[0];
        }
    }
    return best_x;
}

}  // namespace multimin
