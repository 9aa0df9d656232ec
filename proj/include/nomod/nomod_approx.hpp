#ifndef NOMOD_NOMOD_APPROX_HPP
#define NOMOD_NOMOD_APPROX_HPP

#include <cmath>

#include "nomod/core.hpp"
#include "nomod/instances.hpp"

namespace nomod {

// Moments of the pre-modular value b~ = <a, s> + e, per secret/error family,
// plus candidate unwrapping and the expected-inlier estimate.

struct RowStats {
    i64 s1 = 0;  // sum of entries
    i64 s2 = 0;  // sum of squared entries
};

inline RowStats row_stats(const Vec& row) {
    RowStats st;
    for (i64 x : row) {
        st.s1 += x;
        st.s2 += x * x;
    }
    return st;
}

struct MomentEstimate {
    double mu = 0.0;
    double var = 0.0;
};

/// P[CBD_eta = 0] = C(2 eta, eta) / 4^eta.
inline double cbd_zero_prob(int eta) {
    double logc = std::lgamma(2.0 * eta + 1.0) - 2.0 * std::lgamma(eta + 1.0);
    return std::exp(logc - 2.0 * eta * std::log(2.0));
}

/// Probability that a raw-nonzero coordinate survives truncation of a
/// CBD_eta draw to exactly h nonzeros.
inline double retention_alpha(int n, int h, int eta) {
    if (h < 1 || h > n) throw std::invalid_argument("retention_alpha: need 1 <= h <= n");
    double p0 = cbd_zero_prob(eta);
    double qq = 1.0 - p0;
    if (qq <= 0.0) return 1.0;  // degenerate: nothing to truncate
    double alpha = 0.0;
    for (int m = 0; m <= n - 1; ++m) {
        double logpm = std::lgamma(n) - std::lgamma(m + 1.0) - std::lgamma(n - m + 0.0) +
                       m * std::log(qq) + (n - 1 - m) * std::log1p(-qq);
        double pm = std::exp(logpm);
        alpha += (m < h) ? pm : pm * (double)h / (m + 1.0);
    }
    return alpha;
}

/// Closed-form moments of <a, s> from the row statistics.
inline MomentEstimate as_moments(const RowStats& st, const SecretSpec& spec, int n) {
    spec.validate();
    double s1 = (double)st.s1, s2 = (double)st.s2;
    switch (spec.family) {
        case SecretFamily::BinaryBernoulli:
            return {spec.p * s1, spec.p * (1.0 - spec.p) * s2};
        case SecretFamily::BinaryFixedHW: {
            double h = spec.h;
            if (n == 1) return {h * s1, 0.0};  // weight forces the single coordinate
            double var = h * (n - h) / ((double)n * (n - 1)) * (s2 - s1 * s1 / n);
            return {h / n * s1, var};
        }
        case SecretFamily::TernaryBalanced:
            return {0.0, 2.0 / 3.0 * s2};
        case SecretFamily::TernaryFixedHW:
            return {0.0, (double)spec.h / n * s2};
        case SecretFamily::Cbd:
            return {0.0, 0.5 * spec.eta * s2};
        case SecretFamily::CbdFixedHW: {
            if (spec.h == 0) return {0.0, 0.0};
            double alpha = retention_alpha(n, spec.h, spec.eta);
            return {0.0, 0.5 * spec.eta * alpha * s2};
        }
    }
    return {};
}

inline MomentEstimate error_moments(const ErrorSpec& spec) {
    spec.validate();
    return {0.0, spec.variance()};
}

/// Moments of b~ for one row: secret and error contributions are additive.
inline MomentEstimate btilde_moments(const Vec& row, const SecretSpec& secret_spec,
                                     const ErrorSpec& error_spec, int n) {
    MomentEstimate a = as_moments(row_stats(row), secret_spec, n);
    MomentEstimate e = error_moments(error_spec);
    return {a.mu + e.mu, a.var + e.var};
}

struct Candidate {
    i64 shift;        // k
    i64 value;        // b + k q
    double loglik;
    double prob;
};

struct CandidateSet {
    std::vector<Candidate> entries;
    double t_sigma = 4.0;
    bool window_was_empty = false;

    const Candidate& best() const {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].loglik > entries[arg].loglik) arg = i;
        return entries[arg];
    }
};

/// All pre-images b + kq inside the t-sigma window, scored by a Gaussian
/// log-likelihood and softmax-normalized. An empty window falls back to
/// the single nearest candidate.
inline CandidateSet candidates(i64 b, const MomentEstimate& m, i64 q, double t_sigma = 4.0) {
    if (m.var <= 0.0) throw std::invalid_argument("candidates: need sigma > 0");
    double sigma = std::sqrt(m.var);
    CandidateSet set;
    set.t_sigma = t_sigma;
    double lo = m.mu - t_sigma * sigma, hi = m.mu + t_sigma * sigma;
    i64 k_lo = (i64)std::ceil((lo - (double)b) / (double)q);
    i64 k_hi = (i64)std::floor((hi - (double)b) / (double)q);
    if (k_lo > k_hi) {
        set.window_was_empty = true;
        i64 k = (i64)std::llround((m.mu - (double)b) / (double)q);
        k_lo = k_hi = k;
    }
    double max_ll = -1e300;
    for (i64 k = k_lo; k <= k_hi; ++k) {
        i64 val = b + k * q;
        double d = (double)val - m.mu;
        double ll = -d * d / (2.0 * m.var);
        set.entries.push_back({k, val, ll, 0.0});
        max_ll = std::max(max_ll, ll);
    }
    double z = 0.0;
    for (auto& c : set.entries) z += std::exp(c.loglik - max_ll);
    for (auto& c : set.entries) c.prob = std::exp(c.loglik - max_ll) / z;
    return set;
}

/// P[no wrap] = erf(q / (2 sqrt(2) sigma)).
inline double inlier_prob(i64 q, double sigma) {
    if (sigma <= 0.0) return 1.0;  // limit
    return std::erf((double)q / (2.0 * std::sqrt(2.0) * sigma));
}

inline double expected_inliers(const std::vector<double>& sigmas, i64 q) {
    double acc = 0.0;
    for (double s : sigmas) acc += inlier_prob(q, s);
    return acc;
}

}  // namespace nomod

#endif
