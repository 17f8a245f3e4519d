#pragma once

#include "multimin/core.hpp"
#include "multimin/surrogate.hpp"

namespace multimin {

enum class Criterion { ei, lcb, se, geilm };

struct CriterionKind {
    Criterion variant = Criterion::ei;
    double lambda_lcb = 1.0;   // LCB trade-off, > 0
    double lambda_g = 2.0;     // GEILM gradient rate, > 0
    double p_q = 0.001;        // GEILM quantile level, ∈ (0, 0.5)
};

// Shared state for criterion evaluation on one fitted model.
struct CriterionContext {
    double ystar;  // incumbent min(y)
    double ymax;   // max(y)
    double s_p;    // quantile standard deviation, > 0 (floored)
};

// Eq-style closed forms. expected_improvement and geilm are maximized by the
// proposal search; lcb is minimized; se is maximized.
double expected_improvement(double mu, double s, double ystar);
double lcb(double mu, double s, double lambda_lcb);
double se(double s);

// s_p = (ŷ* − max(y))/Φ⁻¹(p_q), floored at 1e−8·max(1, |ŷ*|).
double quantile_sd(double ystar, double ymax, double p_q);

// ŝ·Φ((ŷ*−μ̂)/s_p)·λ_g·exp(−λ_g·‖grad‖∞); grad is the surrogate mean
// gradient in original coordinates.
double geilm(double mu, double s, const Vec& grad, const CriterionContext& ctx,
             double lambda_g);

// Proposal search: scores an LHS candidate set of size 1000·p, locally
// refines the 10 best with minimize() on the negated criterion (finite-
// difference criterion gradients), and returns the best refined point. A
// result within normalized Chebyshev 1e−8 of an existing design point is
// replaced by a fresh stream-drawn LHS point. Throws ProposalFailureError if
// the criterion is non-finite at every candidate.
Vec propose(const KrigingModel& model, const EvaluatedDesign& evaluated,
            const CriterionKind& kind, RandomStream& stream);

}  // namespace multimin
