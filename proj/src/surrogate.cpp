#include "multimin/surrogate.hpp"

#include <cmath>
#include <limits>

#include "multimin/errors.hpp"
#include "multimin/optim.hpp"

namespace multimin {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964091736687747;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNuggetMax = 1e-4;

double matern52(double d) {
    return (1.0 + kSqrt5 * d + (5.0 / 3.0) * d * d) * std::exp(-kSqrt5 * d);
}

// m'(d)/d·(−θ²Δ)-free part: dR/dΔ_j = c(d)·Δ_j/θ_j² with c below; the d in
// m'(d) cancels so the gradient is smooth at d = 0.
double matern52_slope_factor(double d) {
    return -(5.0 / 3.0) * (1.0 + kSqrt5 * d) * std::exp(-kSqrt5 * d);
}

// Scaled distance between normalized rows a and b.
double scaled_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b,
                   const Vec& theta) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) {
        const double t = (a[j] - b[j]) / theta[j];
        s += t * t;
    }
    return std::sqrt(s);
}

struct LikelihoodTerms {
    Eigen::MatrixXd L;
    Vec alpha, u;
    double beta, sigma2, nll, one_kinv_one;
    bool ok;
};

// Builds K = R(θ) + ηI, its Cholesky factor, the GLS-profiled β, σ², and the
// concentrated NLL. ok=false when the factorization fails.
LikelihoodTerms likelihood_terms(const Eigen::MatrixXd& X, const Vec& y,
                                 const Vec& theta, double nugget) {
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        K(i, i) = 1.0 + nugget;
        for (int j = 0; j < i; ++j) {
            const double r = matern52(scaled_dist(X.row(i), X.row(j), theta));
            K(i, j) = r;
            K(j, i) = r;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    LikelihoodTerms t;
    t.ok = (llt.info() == Eigen::Success);
    if (!t.ok) return t;

    t.L = llt.matrixL();
    const Vec ones = Vec::Ones(n);
    t.u = t.L.triangularView<Eigen::Lower>().solve(ones);
    const Vec v = t.L.triangularView<Eigen::Lower>().solve(y);
    t.one_kinv_one = t.u.squaredNorm();
    t.beta = t.u.dot(v) / t.one_kinv_one;
    const Vec r = y - t.beta * ones;
    const Vec w = t.L.triangularView<Eigen::Lower>().solve(r);
    const double rkr = w.squaredNorm();
    t.sigma2 = rkr / n;
    t.alpha = t.L.transpose().triangularView<Eigen::Upper>().solve(w);

    double logdet_half = 0.0;
    for (int i = 0; i < n; ++i) logdet_half += std::log(t.L(i, i));
    if (t.sigma2 <= 0.0 || !std::isfinite(t.sigma2)) {
        t.ok = false;
        return t;
    }
    t.nll = 0.5 * n * (kLog2Pi + 1.0) + 0.5 * n * std::log(t.sigma2) + logdet_half;
    t.ok = std::isfinite(t.nll);
    return t;
}

// Concentrated NLL over t = log θ with analytic gradient (envelope theorem
// covers the profiled β and σ²). Non-finite on factorization failure; the
// caller catches the optimizer's numeric-failure error in that case.
class NllObjective {
public:
    NllObjective(const Eigen::MatrixXd& X, const Vec& y, double nugget)
        : X_(X), y_(y), nugget_(nugget) {}

    double operator()(const Vec& t, Vec& grad) const {
        const int n = static_cast<int>(X_.rows());
        const int p = static_cast<int>(X_.cols());
        Vec theta = t.array().exp();
        LikelihoodTerms lt = likelihood_terms(X_, y_, theta, nugget_);
        if (!lt.ok) {
            grad.setZero(p);
            return std::numeric_limits<double>::quiet_NaN();
        }
        // K⁻¹ and α(=K⁻¹r) drive both gradient terms.
        Eigen::MatrixXd Kinv = Eigen::MatrixXd::Identity(n, n);
        lt.L.triangularView<Eigen::Lower>().solveInPlace(Kinv);
        lt.L.transpose().triangularView<Eigen::Upper>().solveInPlace(Kinv);

        grad.setZero(p);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                const double d = scaled_dist(X_.row(i), X_.row(j), theta);
                const double c = matern52_slope_factor(d);
                const double m = Kinv(i, j) - lt.alpha[i] * lt.alpha[j] / lt.sigma2;
                for (int k = 0; k < p; ++k) {
                    const double delta = X_(i, k) - X_(j, k);
                    // ∂K_ij/∂θ_k = −c·Δ²/θ³; twice for symmetry, ×θ for log scale.
                    grad[k] += m * (-c) * delta * delta / (theta[k] * theta[k]);
                }
            }
        }
        return lt.nll;
    }

private:
    const Eigen::MatrixXd& X_;
    const Vec& y_;
    double nugget_;
};

}  // namespace

KrigingModel fit(const BoxDomain& domain, const EvaluatedDesign& evaluated,
                 const KrigingConfig& config, RandomStream& stream, FitInfo* info) {
    const int n = evaluated.n();
    const int p = domain.p();
    if (n < 2) throw Error("fit: need at least 2 points");
    if (config.nugget_rel <= 0.0 || config.restarts < 1) {
        throw Error("fit: invalid config");
    }

    KrigingModel m;
    m.domain_ = domain;
    m.X_.resize(n, p);
    for (int i = 0; i < n; ++i) {
        m.X_.row(i) = normalize(domain, evaluated.design.points[i]).transpose();
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            if ((m.X_.row(i) - m.X_.row(j)).cwiseAbs().maxCoeff() == 0.0) {
                throw Error("fit: duplicate design points");
            }
        }
    }

    m.y_mean_ = evaluated.responses.mean();
    const Vec centered = evaluated.responses.array() - m.y_mean_;
    m.y_sd_ = std::sqrt(centered.squaredNorm() / n);

    if (m.y_sd_ == 0.0) {
        // Constant responses: pure-nugget model, mean c and sd √nugget.
        m.degenerate_ = true;
        m.y_sd_ = 1.0;
        m.y_std_ = Vec::Zero(n);
        m.theta_ = Vec::Constant(p, config.lengthscale_max);
        m.beta_ = 0.0;
        m.sigma2_ = config.nugget_rel;
        m.nugget_ = config.nugget_rel;
        m.nll_ = 0.0;
        if (info) *info = FitInfo{0.0, {}, 0, config.nugget_rel};
        return m;
    }
    m.y_std_ = centered / m.y_sd_;

    const double t_lo = std::log(config.lengthscale_min);
    const double t_hi = std::log(config.lengthscale_max);
    const BoxDomain log_box(Vec::Constant(p, t_lo), Vec::Constant(p, t_hi));

    // Restart starts are drawn once and reused across nugget escalations.
    std::vector<Vec> starts;
    starts.push_back(Vec::Constant(p, 0.5 * (t_lo + t_hi)));
    if (config.restarts > 1) {
        Design lhs = lhs_sample(log_box, config.restarts - 1, stream);
        for (auto& pt : lhs.points) starts.push_back(pt);
    }

    DescentOptions opts;  // library defaults
    int escalations = 0;
    for (double nugget = config.nugget_rel; nugget <= kNuggetMax * (1.0 + 1e-12);
         nugget *= 10.0) {
        NllObjective obj(m.X_, m.y_std_, nugget);
        ValueGrad field = [&obj](const Vec& t, Vec& g) { return obj(t, g); };

        std::vector<double> start_nlls;
        Vec best_t;
        double best_nll = std::numeric_limits<double>::infinity();
        for (const auto& t0 : starts) {
            Vec g0(p);
            start_nlls.push_back(obj(t0, g0));
            Vec t_end;
            try {
                DescentResult r = minimize(field, t0, log_box, opts);
                t_end = r.x;
            } catch (const NumericFailureError& e) {
                // Factorization failed mid-search; salvage the last good iterate.
                t_end = Eigen::Map<const Vec>(e.last_x().data(),
                                              static_cast<long>(e.last_x().size()));
            }
            Vec g(p);
            const double nll_end = obj(t_end, g);
            if (std::isfinite(nll_end) && nll_end < best_nll) {
                best_nll = nll_end;
                best_t = t_end;
            }
        }

        if (std::isfinite(best_nll)) {
            const Vec theta = best_t.array().exp();
            LikelihoodTerms lt = likelihood_terms(m.X_, m.y_std_, theta, nugget);
            if (lt.ok) {
                m.theta_ = theta;
                m.beta_ = lt.beta;
                m.sigma2_ = lt.sigma2;
                m.nugget_ = nugget;
                m.nll_ = lt.nll;
                m.L_ = lt.L;
                m.alpha_ = lt.alpha;
                m.u_ = lt.u;
                m.one_kinv_one_ = lt.one_kinv_one;
                if (info) *info = FitInfo{lt.nll, start_nlls, escalations, nugget};
                return m;
            }
        }
        ++escalations;
    }
    throw FitFailureError("fit: correlation matrix singular after nugget escalation");
}

Prediction KrigingModel::predict(const Vec& x) const {
    if (degenerate_) return Prediction{y_mean_, std::sqrt(sigma2_)};

    const Vec z = normalize(domain_, x);
    const int nn = n();
    Vec k(nn);
    for (int i = 0; i < nn; ++i) {
        const double d = scaled_dist(z.transpose(), X_.row(i), theta_);
        // The nugget sits on the exact-match diagonal so training points
        // reproduce their responses exactly.
        k[i] = (d == 0.0) ? 1.0 + nugget_ : matern52(d);
    }
    const double mean_std = beta_ + k.dot(alpha_);
    const Vec w = L_.triangularView<Eigen::Lower>().solve(k);
    const double trend_dev = 1.0 - u_.dot(w);
    double var_std =
        sigma2_ * (1.0 + nugget_ - w.squaredNorm() + trend_dev * trend_dev / one_kinv_one_);
    if (var_std < 0.0) var_std = 0.0;
    return Prediction{y_mean_ + y_sd_ * mean_std, y_sd_ * std::sqrt(var_std)};
}

double KrigingModel::predict_mean(const Vec& x) const {
    if (degenerate_) return y_mean_;
    const Vec z = normalize(domain_, x);
    const int nn = n();
    double acc = 0.0;
    for (int i = 0; i < nn; ++i) {
        const double d = scaled_dist(z.transpose(), X_.row(i), theta_);
        const double k = (d == 0.0) ? 1.0 + nugget_ : matern52(d);
        acc += k * alpha_[i];
    }
    return y_mean_ + y_sd_ * (beta_ + acc);
}

Vec KrigingModel::mean_gradient(const Vec& x) const {
    const int p = domain_.p();
    if (degenerate_) return Vec::Zero(p);

    const Vec z = normalize(domain_, x);
    Vec g = Vec::Zero(p);
    for (int i = 0; i < n(); ++i) {
        const double d = scaled_dist(z.transpose(), X_.row(i), theta_);
        const double c = matern52_slope_factor(d) * alpha_[i];
        for (int j = 0; j < p; ++j) {
            g[j] += c * (z[j] - X_(i, j)) / (theta_[j] * theta_[j]);
        }
    }
    for (int j = 0; j < p; ++j) g[j] *= y_sd_ / domain_.width(j);
    return g;
}

}  // namespace multimin
