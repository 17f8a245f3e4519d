#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multimin/core.hpp"
#include "multimin/minima.hpp"
#include "multimin/objectives.hpp"

namespace multimin {

// Experiment grid description. Defaults mirror the benchmark setup: all 15
// registry functions, algorithms {ei, geilm, lhs}, the squared design-size
// grids, 30 replications, δ=0.001, r=1, λ_g=2, p_q=0.001.
struct ExperimentConfig {
    std::vector<std::pair<std::string, int>> functions;  // (name, dim)
    std::vector<std::string> algorithms;                 // ei|geilm|lcb|se|lhs
    std::vector<int> n_init;
    std::vector<int> n_seq;
    std::vector<int> n_lhs;
    int replications = 30;
    std::uint64_t base_seed = 1729;
    double delta = 0.001;
    double r = 1.0;
    double lambda_g = 2.0;
    double p_q = 0.001;
    int workers = 1;
    bool timings = false;  // real wall_seconds break byte-determinism

    static ExperimentConfig defaults();

    // Strict JSON parsing: unknown keys are rejected.
    static ExperimentConfig from_json_text(const std::string& text);
};

// One experiment cell: a (function, algorithm, design-size) combination.
// For the lhs baseline n_init holds n_lhs and n_seq is 0.
struct CellSpec {
    std::string function;
    int dim;
    std::string algorithm;
    int n_init;
    int n_seq;
};

// Stable identifier hashed into the per-task seed.
std::uint64_t cell_hash(const CellSpec& cell);

struct RunRecord {
    CellSpec cell;
    int n_total;
    int replication;
    std::uint64_t seed;
    std::optional<double> pr;
    std::optional<double> ahd;
    std::optional<int> l;
    int h;
    std::optional<char> interval;  // A..E by the pr breakpoints 5/50/500/1500
    int skipped_boundary = 0;
    int fit_failures = 0;
    double wall_seconds = 0.0;
    bool failed = false;
};

// Exact output column order.
extern const char* const kCsvHeader;

std::string format_record(const RunRecord& rec, bool timings);

// Runs one (cell, replication) task with the given derived seed: MBO (or
// plain LHS fit), then minima extraction on the final surrogate mean with
// analytic gradients, agglomeration with δ, and metrics against the
// registry's tabulated minima. Surrogate fit failure yields a flagged row.
RunRecord run_cell(const CellSpec& cell, const ExperimentConfig& params,
                   int replication, std::uint64_t seed);

struct GridSummary {
    std::map<std::string, int> cells_per_algorithm;
    long long total_rows = 0;
    long long failures = 0;
    bool executed = false;
};

// Enumerates all (cell, replication) tasks in deterministic order, executes
// them on a worker pool (unless dry_run), and writes the CSV atomically.
// Task seeds depend only on (base_seed, cell, replication), so the output is
// byte-identical for any worker count. Refuses to overwrite an existing
// output unless force.
GridSummary run_grid(const ExperimentConfig& config, const std::string& out_path,
                     bool force, bool dry_run);

struct OracleReport {
    std::string function;
    int dim = 0;
    int h = 0;
    int clusters = 0;
    int skipped_boundary = 0;
    int non_converged = 0;
    std::vector<double> match_distance;  // per tabulated minimum, Chebyshev
    double worst_match = 0.0;
    bool pass = false;
};

// Multistart descent on the TRUE function (finite-difference gradients with
// a boundary-clamped stencil), agglomeration, and comparison of the cluster
// representatives against the tabulated minima. n_override > 0 replaces the
// default sample_size(dim) multistart count.
OracleReport verify_oracle(const std::string& name, int dim, double tolerance,
                           int n_override = 0);

// Central finite differences with the stencil clamped into the domain
// (one-sided at the bounds); safe for descent iterates that touch bounds.
Vec clamped_numerical_gradient(const ObjectiveFunction& fn, const Vec& x,
                               double h = 1e-6);

}  // namespace multimin
