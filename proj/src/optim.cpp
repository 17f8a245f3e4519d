#include "multimin/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "multimin/errors.hpp"

namespace multimin {

namespace {

using Mat = Eigen::MatrixXd;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Snaps coordinates within tol of a bound exactly onto it and clamps the
// rest into [0,1]; iterates are feasible at all times, never epsilon-outside.
void clamp_unit(Vec& z, double tol) {
    for (int j = 0; j < z.size(); ++j) {
        if (z[j] < tol) z[j] = 0.0;
        else if (z[j] > 1.0 - tol) z[j] = 1.0;
    }
}

// Objective in normalized coordinates: chain rule multiplies the gradient by
// the per-axis widths.
class NormalizedField {
public:
    NormalizedField(const ValueGrad& field, const BoxDomain& dom)
        : field_(field), dom_(dom), x_(dom.p()), g_(dom.p()) {}

    double eval(const Vec& z, Vec& g) {
        const int p = dom_.p();
        for (int j = 0; j < p; ++j) x_[j] = dom_.lower[j] + dom_.width(j) * z[j];
        const double f = field_(x_, g_);
        for (int j = 0; j < p; ++j) g[j] = g_[j] * dom_.width(j);
        return f;
    }

    Vec to_original(const Vec& z) const {
        Vec x(dom_.p());
        for (int j = 0; j < dom_.p(); ++j) x[j] = dom_.lower[j] + dom_.width(j) * z[j];
        return x;
    }

private:
    const ValueGrad& field_;
    const BoxDomain& dom_;
    Vec x_, g_;
};

std::vector<double> to_std(const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// Quasi-Newton Hessian approximation rebuilt densely from the limited
// history: B = θI − W M Wᵀ with W = [Y θS]. The problems this library
// solves have at most ~10 variables, so dense algebra is both simpler and
// faster than the compact-form updates.
Mat build_b(const std::deque<std::pair<Vec, Vec>>& pairs, double theta, int p) {
    const int k = static_cast<int>(pairs.size());
    if (k == 0) return Mat::Identity(p, p) * theta;
    Mat S(p, k), Y(p, k);
    for (int i = 0; i < k; ++i) {
        S.col(i) = pairs[i].first;
        Y.col(i) = pairs[i].second;
    }
    Mat W(p, 2 * k);
    W.leftCols(k) = Y;
    W.rightCols(k) = theta * S;
    Mat SY = S.transpose() * Y;  // SY(i,j) = sᵢᵀyⱼ
    Mat Minv = Mat::Zero(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) Minv(i, i) = -SY(i, i);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < i; ++j) {
            Minv(k + i, j) = SY(i, j);  // L
            Minv(j, k + i) = SY(i, j);  // Lᵀ
        }
    }
    Minv.bottomRightCorner(k, k) = theta * (S.transpose() * S);
    Eigen::FullPivLU<Mat> lu(Minv);
    if (!lu.isInvertible()) return Mat::Identity(p, p) * theta;
    Mat B = Mat::Identity(p, p) * theta - W * lu.solve(W.transpose());
    return B;
}

// Generalized Cauchy point: exact minimizer of the quadratic model along the
// piecewise-linear projected steepest-descent path.
Vec cauchy_point(const Vec& z, const Vec& g, const Mat& B) {
    const int p = static_cast<int>(z.size());
    Vec d = -g;
    std::vector<std::pair<double, int>> events;
    for (int j = 0; j < p; ++j) {
        double t;
        if (d[j] > 0.0) t = (1.0 - z[j]) / d[j];
        else if (d[j] < 0.0) t = (0.0 - z[j]) / d[j];
        else continue;
        if (t <= 0.0) {
            d[j] = 0.0;  // already at the bound this direction pushes into
            continue;
        }
        events.emplace_back(t, j);
    }
    std::sort(events.begin(), events.end());

    Vec w = Vec::Zero(p);  // x_cp − z so far
    double t_cur = 0.0;
    std::size_t idx = 0;
    while (!d.isZero(0.0)) {
        const double fp = g.dot(d) + d.dot(B * w);
        if (fp >= 0.0) break;
        const double fpp = d.dot(B * d);
        const double t_next = (idx < events.size()) ? events[idx].first : kInf;
        const double dt_star = (fpp > 0.0) ? -fp / fpp : kInf;
        if (t_cur + dt_star < t_next) {
            w += dt_star * d;
            break;
        }
        if (t_next == kInf) break;
        w += (t_next - t_cur) * d;
        t_cur = t_next;
        while (idx < events.size() && events[idx].first <= t_cur) {
            const int j = events[idx].second;
            w[j] = (d[j] > 0.0 ? 1.0 : 0.0) - z[j];  // land exactly on the bound
            d[j] = 0.0;
            ++idx;
        }
    }
    Vec xcp = z + w;
    clamp_unit(xcp, 0.0);
    return xcp;
}

// Primal subspace step: minimizes the model over the variables free at the
// Cauchy point, then backtracks the solution into the box.
Vec subspace_step(const Vec& z, const Vec& g, const Mat& B, const Vec& xcp,
                  double bound_tol) {
    const int p = static_cast<int>(z.size());
    std::vector<int> free_idx;
    for (int j = 0; j < p; ++j) {
        if (xcp[j] > bound_tol && xcp[j] < 1.0 - bound_tol) free_idx.push_back(j);
    }
    const int nf = static_cast<int>(free_idx.size());
    if (nf == 0) return xcp;

    const Vec r = g + B * (xcp - z);  // model gradient at the Cauchy point
    Vec rf(nf);
    Mat Bff(nf, nf);
    for (int a = 0; a < nf; ++a) {
        rf[a] = r[free_idx[a]];
        for (int b = 0; b < nf; ++b) Bff(a, b) = B(free_idx[a], free_idx[b]);
    }
    Eigen::LDLT<Mat> ldlt(Bff);
    if (ldlt.info() != Eigen::Success) return xcp;
    Vec df = ldlt.solve(-rf);
    if (!df.allFinite() || rf.dot(df) >= 0.0) return xcp;

    double alpha = 1.0;
    for (int a = 0; a < nf; ++a) {
        const double xj = xcp[free_idx[a]];
        if (df[a] > 0.0) alpha = std::min(alpha, (1.0 - xj) / df[a]);
        else if (df[a] < 0.0) alpha = std::min(alpha, (0.0 - xj) / df[a]);
    }
    Vec xbar = xcp;
    for (int a = 0; a < nf; ++a) xbar[free_idx[a]] += alpha * df[a];
    clamp_unit(xbar, 0.0);
    return xbar;
}

struct LineSearchOut {
    double alpha = 0.0;
    double f = 0.0;
    Vec z, g;
    bool ok = false;
};

struct Probe {
    double alpha, f, gd;
    Vec z, g;
};

// Strong Wolfe line search on φ(α) = f(z0 + α·d), α ∈ (0, 1]. The step is
// capped at 1 because z0 + d is already the feasible subspace point; when
// the cap binds, the Armijo point at the cap is accepted (the curvature
// condition can be unsatisfiable on a truncated segment).
class WolfeSearch {
public:
    WolfeSearch(NormalizedField& field, const Vec& z0, double f0, const Vec& d,
                double gd0, const DescentOptions& opts, const Vec& last_good_z,
                double last_good_f)
        : field_(field), z0_(z0), f0_(f0), d_(d), gd0_(gd0), opts_(opts),
          last_good_z_(last_good_z), last_good_f_(last_good_f) {}

    LineSearchOut run() {
        Probe prev{0.0, f0_, gd0_, z0_, Vec()};
        double alpha = 1.0;
        const int kMaxIter = 25;
        for (int i = 0; i < kMaxIter; ++i) {
            Probe cur = probe(alpha);
            if (cur.f > f0_ + opts_.c1 * alpha * gd0_ || (i > 0 && cur.f >= prev.f)) {
                return zoom(prev, cur);
            }
            if (std::fabs(cur.gd) <= -opts_.c2 * gd0_) return accept(cur);
            if (cur.gd >= 0.0) return zoom(cur, prev);
            if (alpha >= 1.0) return accept(cur);  // cap binds, Armijo holds
            prev = cur;
            alpha = std::min(1.0, 2.0 * alpha);
        }
        return accept(prev.alpha > 0.0 ? prev : probe(1.0));
    }

private:
    Probe probe(double alpha) {
        Vec z = z0_ + alpha * d_;
        clamp_unit(z, 0.0);
        Vec g(z.size());
        const double f = field_.eval(z, g);
        if (!std::isfinite(f) || !g.allFinite()) {
            throw NumericFailureError("minimize: non-finite objective or gradient",
                                      to_std(field_.to_original(last_good_z_)),
                                      last_good_f_);
        }
        return Probe{alpha, f, g.dot(d_), std::move(z), std::move(g)};
    }

    LineSearchOut accept(const Probe& pr) {
        if (pr.alpha <= 0.0 || pr.f > f0_) return LineSearchOut{};
        return LineSearchOut{pr.alpha, pr.f, pr.z, pr.g, true};
    }

    // lo: best (lowest f) Armijo point so far; hi: other end of the bracket.
    LineSearchOut zoom(Probe lo, Probe hi) {
        for (int i = 0; i < 30; ++i) {
            double alpha = interpolate(lo, hi);
            const double width = std::fabs(hi.alpha - lo.alpha);
            const double safeguard = 0.1 * width;
            const double a_min = std::min(lo.alpha, hi.alpha);
            const double a_max = std::max(lo.alpha, hi.alpha);
            alpha = std::clamp(alpha, a_min + safeguard, a_max - safeguard);
            if (!(alpha > 0.0) || width < 1e-14) break;
            Probe cur = probe(alpha);
            if (cur.f > f0_ + opts_.c1 * alpha * gd0_ || cur.f >= lo.f) {
                hi = cur;
            } else {
                if (std::fabs(cur.gd) <= -opts_.c2 * gd0_) return accept(cur);
                if (cur.gd * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                lo = cur;
            }
        }
        if (lo.alpha > 0.0 && lo.f <= f0_) return accept(lo);
        return LineSearchOut{};
    }

    // Minimizer of the quadratic through (lo: value and slope) and (hi:
    // value); falls back to bisection when degenerate.
    double interpolate(const Probe& lo, const Probe& hi) const {
        const double da = hi.alpha - lo.alpha;
        if (da == 0.0) return lo.alpha;
        const double denom = hi.f - lo.f - lo.gd * da;
        if (denom != 0.0) {
            const double alpha = lo.alpha - 0.5 * lo.gd * da * da / denom;
            if (std::isfinite(alpha)) return alpha;
        }
        return 0.5 * (lo.alpha + hi.alpha);
    }

    NormalizedField& field_;
    const Vec& z0_;
    double f0_;
    const Vec& d_;
    double gd0_;
    const DescentOptions& opts_;
    const Vec& last_good_z_;
    double last_good_f_;
};

double projected_gradient_norm(const Vec& z, const Vec& g) {
    double nrm = 0.0;
    for (int j = 0; j < z.size(); ++j) {
        const double step = std::clamp(z[j] - g[j], 0.0, 1.0) - z[j];
        nrm = std::max(nrm, std::fabs(step));
    }
    return nrm;
}

}  // namespace

DescentResult minimize(const ValueGrad& field, const Vec& x0, const BoxDomain& bounds,
                       const DescentOptions& opts) {
    const int p = bounds.p();
    if (!bounds.contains(x0)) throw DomainError("minimize: x0 outside bounds");

    NormalizedField nfield(field, bounds);
    Vec z = normalize(bounds, x0);
    clamp_unit(z, opts.bound_tol);
    Vec g(p);
    double f = nfield.eval(z, g);
    if (!std::isfinite(f) || !g.allFinite()) {
        throw NumericFailureError("minimize: non-finite objective at start", to_std(x0), f);
    }

    std::deque<std::pair<Vec, Vec>> pairs;  // (s, y), oldest first
    double theta = 1.0;
    int iters = 0;
    bool converged = false;

    while (iters < opts.max_iters) {
        if (projected_gradient_norm(z, g) <= opts.pg_tol) {
            converged = true;
            break;
        }

        const Mat B = build_b(pairs, theta, p);
        const Vec xcp = cauchy_point(z, g, B);
        Vec xbar = subspace_step(z, g, B, xcp, opts.bound_tol);

        Vec d = xbar - z;
        double gd = g.dot(d);
        if (gd >= 0.0) {
            d = xcp - z;
            gd = g.dot(d);
        }
        if (gd >= 0.0) {
            // Quasi-Newton model gave no descent; restart from scaled steepest
            // descent along the projected gradient path.
            pairs.clear();
            theta = 1.0;
            Vec zs = z - g;
            clamp_unit(zs, 0.0);
            d = zs - z;
            gd = g.dot(d);
        }
        if (gd >= 0.0) break;  // stationary up to rounding

        if (opts.max_step > 0.0) {
            const double dn = d.lpNorm<Eigen::Infinity>();
            if (dn > opts.max_step) {
                const double scale = opts.max_step / dn;
                d *= scale;
                gd *= scale;
            }
        }

        Vec z_good = z;
        WolfeSearch search(nfield, z, f, d, gd, opts, z_good, f);
        LineSearchOut ls = search.run();
        if (!ls.ok) break;

        ++iters;
        const Vec s = ls.z - z;
        const Vec y = ls.g - g;
        const double f_prev = f;
        z = ls.z;
        f = ls.f;
        g = ls.g;

        const double sy = s.dot(y);
        if (sy > 2.2e-16 * y.squaredNorm()) {
            pairs.emplace_back(s, y);
            if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
            theta = y.squaredNorm() / sy;
        }

        if (f_prev - f <= opts.f_rel_tol * std::max({std::fabs(f_prev), std::fabs(f), 1.0})) {
            converged = true;
            break;
        }
    }

    DescentResult res;
    res.projected_gradient_norm = projected_gradient_norm(z, g);
    if (!converged && res.projected_gradient_norm <= opts.pg_tol) converged = true;
    res.converged = converged;
    res.iterations = iters;
    res.f = f;
    res.x = Vec(p);
    res.hit_bound = false;
    for (int j = 0; j < p; ++j) {
        if (z[j] <= 0.0) {
            res.x[j] = bounds.lower[j];
            res.hit_bound = true;
        } else if (z[j] >= 1.0) {
            res.x[j] = bounds.upper[j];
            res.hit_bound = true;
        } else {
            res.x[j] = std::clamp(bounds.lower[j] + bounds.width(j) * z[j],
                                  bounds.lower[j], bounds.upper[j]);
        }
    }
    return res;
}

}  // namespace multimin
