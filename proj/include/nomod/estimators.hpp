#ifndef NOMOD_ESTIMATORS_HPP
#define NOMOD_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "nomod/core.hpp"
#include "nomod/instances.hpp"

namespace nomod {

// Robust linear regression (OLS, Huber, RANSAC, Tukey biweight via IRLS),
// secret quantization, and residual verification.

struct RegressionProblem {
    Eigen::MatrixXd X;  // M x n
    Eigen::VectorXd y;  // length M
    Eigen::VectorXd weights;  // optional prior weights; empty = all ones

    int samples() const { return (int)X.rows(); }
    int dims() const { return (int)X.cols(); }
    bool underdetermined() const { return samples() < dims(); }
};

struct FitResult {
    Eigen::VectorXd coeffs;
    Eigen::VectorXd weights;      // final per-sample weights in [0, 1]
    std::vector<char> inlier_mask;  // RANSAC consensus; empty otherwise
    int iterations = 0;
    bool converged = false;
    bool ridge_fallback = false;
    bool failed = false;
    std::vector<double> loss_trace;  // robust loss per IRLS iteration
};

inline Eigen::VectorXd solve_weighted_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& w, bool* ridge_used) {
    Eigen::MatrixXd Xw = X;
    Eigen::VectorXd yw = y;
    for (int i = 0; i < X.rows(); ++i) {
        double sw = std::sqrt(std::max(0.0, w(i)));
        Xw.row(i) *= sw;
        yw(i) *= sw;
    }
    Eigen::MatrixXd G = Xw.transpose() * Xw;
    Eigen::VectorXd rhs = Xw.transpose() * yw;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Eigen::VectorXd sol = ldlt.solve(rhs);
        double resid = (G * sol - rhs).norm();
        if (resid <= 1e-6 * (1.0 + rhs.norm())) {
            if (ridge_used) *ridge_used = false;
            return sol;
        }
    }
    double lambda = 1e-8 * G.trace() + 1e-12;
    G.diagonal().array() += lambda;
    if (ridge_used) *ridge_used = true;
    return G.ldlt().solve(rhs);
}

inline FitResult fit_ols(const RegressionProblem& p) {
    FitResult r;
    Eigen::VectorXd w = p.weights.size() ? p.weights
                                         : Eigen::VectorXd::Ones(p.samples());
    r.coeffs = solve_weighted_ls(p.X, p.y, w, &r.ridge_fallback);
    r.weights = w;
    r.iterations = 1;
    r.converged = true;
    return r;
}

/// Median absolute deviation scale, MAD / 0.6745.
inline double mad_scale(const Eigen::VectorXd& residuals) {
    std::vector<double> a(residuals.size());
    for (int i = 0; i < residuals.size(); ++i) a[i] = std::fabs(residuals(i));
    std::nth_element(a.begin(), a.begin() + a.size() / 2, a.end());
    double med = a[a.size() / 2];
    return med / 0.6745;
}

inline double huber_loss(const Eigen::VectorXd& r, double eps) {
    double acc = 0.0;
    for (int i = 0; i < r.size(); ++i) {
        double a = std::fabs(r(i));
        acc += (a <= eps) ? 0.5 * r(i) * r(i) : eps * a - 0.5 * eps * eps;
    }
    return acc;
}

inline double tukey_loss(const Eigen::VectorXd& r, double c) {
    double acc = 0.0;
    for (int i = 0; i < r.size(); ++i) {
        double a = std::fabs(r(i));
        if (a >= c) {
            acc += c * c / 6.0;
        } else {
            double u = 1.0 - (a / c) * (a / c);
            acc += c * c / 6.0 * (1.0 - u * u * u);
        }
    }
    return acc;
}

/// IRLS with Huber weights w(r) = 1 for |r| <= eps, eps/|r| beyond.
/// eps <= 0 selects 1.345 * MAD-scale of the initial OLS residuals; the
/// scale is frozen after the warm start so the per-iteration loss is
/// monotone.
inline FitResult fit_huber(const RegressionProblem& p, double eps = 0.0, int max_iter = 50,
                           double tol = 1e-8) {
    FitResult r = fit_ols(p);
    Eigen::VectorXd resid = p.y - p.X * r.coeffs;
    if (eps <= 0.0) {
        double scale = mad_scale(resid);
        if (scale <= 1e-12) scale = std::max(1e-12, resid.cwiseAbs().maxCoeff());
        eps = 1.345 * scale;
    }
    r.converged = false;
    r.loss_trace.clear();
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w(p.samples());
        for (int i = 0; i < p.samples(); ++i) {
            double a = std::fabs(resid(i));
            w(i) = (a <= eps) ? 1.0 : eps / a;
        }
        if (p.weights.size()) w = w.cwiseProduct(p.weights);
        Eigen::VectorXd next = solve_weighted_ls(p.X, p.y, w, &r.ridge_fallback);
        double delta = (next - r.coeffs).norm();
        r.coeffs = next;
        resid = p.y - p.X * r.coeffs;
        r.weights = w;
        r.iterations = it + 1;
        r.loss_trace.push_back(huber_loss(resid, eps));
        if (delta < tol * (1.0 + r.coeffs.norm())) {
            r.converged = true;
            break;
        }
    }
    return r;
}

/// IRLS with Tukey biweight weights, warm-started from the Huber fit.
/// c <= 0 selects 4.685 * MAD-scale of the Huber residuals.
inline FitResult fit_tukey(const RegressionProblem& p, double c = 0.0, int max_iter = 50,
                           double tol = 1e-8) {
    FitResult warm = fit_huber(p);
    FitResult r = warm;
    Eigen::VectorXd resid = p.y - p.X * r.coeffs;
    if (c <= 0.0) {
        double scale = mad_scale(resid);
        if (scale <= 1e-12) scale = std::max(1e-12, resid.cwiseAbs().maxCoeff());
        c = 4.685 * scale;
    }
    r.converged = false;
    r.loss_trace.clear();
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w(p.samples());
        double wsum = 0.0;
        for (int i = 0; i < p.samples(); ++i) {
            double a = std::fabs(resid(i));
            if (a >= c) {
                w(i) = 0.0;
            } else {
                double u = 1.0 - (a / c) * (a / c);
                w(i) = u * u;
            }
            wsum += w(i);
        }
        if (wsum <= 0.0) {
            // every sample rejected: keep the Huber result, flagged
            FitResult fb = warm;
            fb.failed = true;
            return fb;
        }
        if (p.weights.size()) w = w.cwiseProduct(p.weights);
        Eigen::VectorXd next = solve_weighted_ls(p.X, p.y, w, &r.ridge_fallback);
        double delta = (next - r.coeffs).norm();
        r.coeffs = next;
        resid = p.y - p.X * r.coeffs;
        r.weights = w;
        r.iterations = it + 1;
        r.loss_trace.push_back(tukey_loss(resid, c));
        if (delta < tol * (1.0 + r.coeffs.norm())) {
            r.converged = true;
            break;
        }
    }
    return r;
}

/// Random-subset consensus. Best model by inlier count; ties break on
/// lower inlier residual variance; final refit on the consensus set.
inline FitResult fit_ransac(const RegressionProblem& p, int subset_size, int n_trials,
                            double residual_tol, std::uint64_t seed) {
    if (n_trials < 1) throw std::invalid_argument("fit_ransac: need n_trials >= 1");
    if (subset_size < p.dims()) throw std::invalid_argument("fit_ransac: subset_size < dims");
    Rng rng(seed);
    int M = p.samples();
    int best_count = -1;
    double best_var = 0.0;
    std::vector<char> best_mask;
    for (int t = 0; t < n_trials; ++t) {
        std::vector<int> idx = rng.sample_without_replacement(M, subset_size);
        RegressionProblem sub;
        sub.X.resize(subset_size, p.dims());
        sub.y.resize(subset_size);
        for (int i = 0; i < subset_size; ++i) {
            sub.X.row(i) = p.X.row(idx[i]);
            sub.y(i) = p.y(idx[i]);
        }
        FitResult trial = fit_ols(sub);
        Eigen::VectorXd resid = p.y - p.X * trial.coeffs;
        std::vector<char> mask(M, 0);
        int count = 0;
        double var = 0.0;
        for (int i = 0; i < M; ++i) {
            if (std::fabs(resid(i)) <= residual_tol) {
                mask[i] = 1;
                ++count;
                var += resid(i) * resid(i);
            }
        }
        if (count > 0) var /= count;
        if (count > best_count || (count == best_count && var < best_var)) {
            best_count = count;
            best_var = var;
            best_mask = std::move(mask);
        }
    }
    FitResult r;
    if (best_count < p.dims()) {
        r.failed = true;
        r.coeffs = Eigen::VectorXd::Zero(p.dims());
        r.weights = Eigen::VectorXd::Zero(M);
        return r;
    }
    RegressionProblem in;
    in.X.resize(best_count, p.dims());
    in.y.resize(best_count);
    int at = 0;
    for (int i = 0; i < M; ++i) {
        if (!best_mask[i]) continue;
        in.X.row(at) = p.X.row(i);
        in.y(at) = p.y(i);
        ++at;
    }
    r = fit_ols(in);
    r.inlier_mask = std::move(best_mask);
    Eigen::VectorXd w(M);
    for (int i = 0; i < M; ++i) w(i) = r.inlier_mask[i] ? 1.0 : 0.0;
    r.weights = w;
    return r;
}

/// Round and clip a real coefficient vector onto the secret family's
/// support; FixedHW variants keep the h largest-magnitude coordinates.
inline Vec normalize_round_clip(const Eigen::VectorXd& s_real, const SecretSpec& spec) {
    int n = (int)s_real.size();
    if (n != spec.n_total) throw std::invalid_argument("normalize_round_clip: length mismatch");
    i64 lo, hi;
    switch (spec.family) {
        case SecretFamily::BinaryBernoulli:
        case SecretFamily::BinaryFixedHW: lo = 0; hi = 1; break;
        case SecretFamily::TernaryBalanced:
        case SecretFamily::TernaryFixedHW: lo = -1; hi = 1; break;
        default: lo = -spec.eta; hi = spec.eta; break;
    }
    Vec s(n);
    for (int i = 0; i < n; ++i)
        s[i] = std::clamp((i64)std::llround(s_real(i)), lo, hi);
    bool fixed_hw = spec.family == SecretFamily::BinaryFixedHW ||
                    spec.family == SecretFamily::TernaryFixedHW ||
                    spec.family == SecretFamily::CbdFixedHW;
    if (fixed_hw) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::fabs(s_real(a)) > std::fabs(s_real(b));
        });
        std::vector<char> keep(n, 0);
        for (int t = 0; t < spec.h && t < n; ++t) keep[idx[t]] = 1;
        for (int i = 0; i < n; ++i) {
            if (!keep[i]) {
                s[i] = 0;
            } else if (s[i] == 0) {
                // kept coordinate must be active; snap to the nearest nonzero
                s[i] = s_real(i) >= 0.0 ? 1 : -1;
                if (spec.family == SecretFamily::BinaryFixedHW) s[i] = 1;
            }
        }
    }
    return s;
}

struct VerificationReport {
    Vec residuals;      // centered mod q
    double sigma_r = 0.0;
    double threshold = 0.0;
    bool accept = false;
    bool support_ok = true;
};

/// Accept iff the residual spread is consistent with the error law:
/// sigma_r <= tau * sigma_e, plus a support bound for bounded families.
inline VerificationReport verify_secret(const Mat& A, const Vec& b, i64 q, const Vec& s_hat,
                                        const ErrorSpec& error_spec, double tau = 1.5) {
    VerificationReport rep;
    int M = (int)A.size();
    rep.residuals.resize(M);
    double acc = 0.0;
    i64 max_abs = 0;
    for (int i = 0; i < M; ++i) {
        i64 r = center_mod(b[i] - dot(A[i], s_hat), q);
        rep.residuals[i] = r;
        acc += (double)r * r;
        max_abs = std::max(max_abs, std::llabs(r));
    }
    rep.sigma_r = M > 0 ? std::sqrt(acc / M) : 0.0;
    double sigma_e = std::sqrt(error_spec.variance());
    rep.threshold = tau * sigma_e;
    rep.support_ok = true;
    if (error_spec.family == ErrorFamily::Cbd) {
        double bound = (double)error_spec.eta + 3.0 * sigma_e;  // support + slack
        rep.support_ok = (double)max_abs <= bound;
    }
    rep.accept = rep.sigma_r <= rep.threshold && rep.support_ok;
    return rep;
}

inline VerificationReport verify_secret(const LweInstance& inst, const Vec& s_hat,
                                        double tau = 1.5) {
    return verify_secret(inst.A, inst.b, inst.q, s_hat, inst.error_spec, tau);
}

}  // namespace nomod

#endif
