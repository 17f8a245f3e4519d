#pragma once

#include <functional>
#include <string>
#include <vector>

#include "multimin/core.hpp"
#include "multimin/errors.hpp"
#include "multimin/infill.hpp"
#include "multimin/objectives.hpp"
#include "multimin/surrogate.hpp"

namespace multimin {

struct MboConfig {
    ObjectiveFunction objective;
    int n_init = 9;                // ≥ 2 (≥ p+1 recommended)
    int n_seq = 0;                 // ≥ 0
    CriterionKind criterion;
    KrigingConfig surrogate;
    std::uint64_t seed = 0;
};

struct MboIterationRecord {
    int iteration;          // 1-based sequential-phase index
    Vec proposed;
    double response;
    double incumbent;       // after this evaluation
    double criterion_value; // score of the accepted proposal
    double fit_seconds;
};

struct MboTrace {
    std::vector<MboIterationRecord> records;
};

struct MboResult {
    EvaluatedDesign evaluated;
    KrigingModel model;  // final refit on all n_init + n_seq points
    MboTrace trace;
};

// Surrogate fit failed (after nugget escalation) inside the loop; carries
// the progress made so far.
class MboAbortError : public Error {
public:
    MboAbortError(const std::string& msg, MboTrace trace, int evaluations)
        : Error(msg), trace_(std::move(trace)), evaluations_(evaluations) {}
    const MboTrace& trace() const { return trace_; }
    int evaluations() const { return evaluations_; }

private:
    MboTrace trace_;
    int evaluations_;
};

// Sequential model-based minimization: LHS initial design, then n_seq
// iterations of fit → propose → evaluate → augment, then a final refit.
// The objective is called exactly n_init + n_seq times. One RandomStream
// seeded from config.seed drives, in order: the initial LHS, then per
// iteration the fit restarts and the proposal search, then the final refit.
MboResult run(const MboConfig& config);

}  // namespace multimin
