#pragma once

#include <vector>

#include "multimin/core.hpp"

namespace multimin {

struct KrigingConfig {
    double nugget_rel = 1e-8;       // relative nugget on the unit-diagonal correlation
    double lengthscale_min = 1e-3;  // bounds in normalized coordinates
    double lengthscale_max = 10.0;
    int restarts = 5;               // 1 center start + (restarts−1) LHS starts
};

struct Prediction {
    double mean;
    double sd;  // ≥ 0 (tiny negative round-off clamped)
};

// Fit diagnostics for tests and failure accounting.
struct FitInfo {
    double nll = 0.0;                 // concentrated negative log-likelihood
    std::vector<double> start_nlls;   // NLL at each restart's initial point
    int escalations = 0;              // nugget ladder steps taken
    double nugget_used = 0.0;
};

// Kriging (Gaussian-process) surrogate: anisotropic Matérn-5/2 correlation,
// constant trend, responses standardized internally. Operates on normalized
// [0,1]ᵖ inputs; all public methods take and return original coordinates.
// Immutable after fit; concurrent predict/mean_gradient calls are safe.
class KrigingModel {
public:
    Prediction predict(const Vec& x) const;

    // Predictive mean only (no variance solve); used by descent on the mean.
    double predict_mean(const Vec& x) const;

    // Analytic gradient of the predictive mean, original coordinates.
    Vec mean_gradient(const Vec& x) const;

    const BoxDomain& domain() const { return domain_; }
    const Vec& lengthscales() const { return theta_; }
    double process_variance() const { return sigma2_; }
    double trend() const { return beta_; }
    double nll() const { return nll_; }
    double nugget() const { return nugget_; }
    bool degenerate() const { return degenerate_; }
    int n() const { return static_cast<int>(X_.rows()); }

private:
    friend KrigingModel fit(const BoxDomain&, const EvaluatedDesign&,
                            const KrigingConfig&, RandomStream&, FitInfo*);

    BoxDomain domain_{Vec::Zero(1), Vec::Ones(1)};
    Eigen::MatrixXd X_;   // normalized training inputs, n×p
    Vec y_std_;           // standardized responses
    double y_mean_ = 0.0, y_sd_ = 1.0;
    Vec theta_;           // lengthscales, normalized coordinates
    double sigma2_ = 0.0; // process variance, standardized scale
    double beta_ = 0.0;   // constant trend, standardized scale
    double nugget_ = 0.0;
    double nll_ = 0.0;
    bool degenerate_ = false;

    Eigen::MatrixXd L_;   // Cholesky factor of K = R + nugget·I
    Vec alpha_;           // K⁻¹(y_std − β·1)
    Vec u_;               // L⁻¹·1
    double one_kinv_one_ = 0.0;
};

// Maximum-likelihood fit: multistart minimize() over log-lengthscales with
// analytic NLL gradients; β and σ² profiled in closed form. On Cholesky
// failure the nugget escalates ×10 (up to 1e−4) before FitFailureError.
// Requires n ≥ 2, pairwise-distinct points, finite responses.
KrigingModel fit(const BoxDomain& domain, const EvaluatedDesign& evaluated,
                 const KrigingConfig& config, RandomStream& stream,
                 FitInfo* info = nullptr);

}  // namespace multimin
