#ifndef NOMOD_INSTANCES_HPP
#define NOMOD_INSTANCES_HPP

#include <optional>

#include "nomod/core.hpp"
#include "nomod/ring.hpp"

namespace nomod {

enum class SecretFamily {
    BinaryBernoulli,
    BinaryFixedHW,
    TernaryBalanced,
    TernaryFixedHW,
    Cbd,
    CbdFixedHW,
};

struct SecretSpec {
    SecretFamily family = SecretFamily::BinaryBernoulli;
    int n_total = 0;
    double p = 0.5;  // BinaryBernoulli
    int h = 0;       // FixedHW variants
    int eta = 0;     // CBD variants

    void validate() const {
        if (n_total < 1) throw std::invalid_argument("secret dimension must be >= 1");
        switch (family) {
            case SecretFamily::BinaryBernoulli:
                if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("need 0 < p < 1");
                break;
            case SecretFamily::BinaryFixedHW:
            case SecretFamily::TernaryFixedHW:
                if (h < 0 || h > n_total) throw std::invalid_argument("need 0 <= h <= n");
                break;
            case SecretFamily::Cbd:
                if (eta < 1) throw std::invalid_argument("need eta >= 1");
                break;
            case SecretFamily::CbdFixedHW:
                if (eta < 1) throw std::invalid_argument("need eta >= 1");
                if (h < 0 || h > n_total) throw std::invalid_argument("need 0 <= h <= n");
                break;
            default:
                break;
        }
    }

    static SecretSpec binary_bernoulli(int n, double p = 0.5) {
        return {SecretFamily::BinaryBernoulli, n, p, 0, 0};
    }
    static SecretSpec binary_fixed_hw(int n, int h) {
        return {SecretFamily::BinaryFixedHW, n, 0.5, h, 0};
    }
    static SecretSpec ternary_balanced(int n) {
        return {SecretFamily::TernaryBalanced, n, 0.5, 0, 0};
    }
    static SecretSpec ternary_fixed_hw(int n, int h) {
        return {SecretFamily::TernaryFixedHW, n, 0.5, h, 0};
    }
    static SecretSpec cbd(int n, int eta) {
        return {SecretFamily::Cbd, n, 0.5, 0, eta};
    }
    static SecretSpec cbd_fixed_hw(int n, int eta, int h) {
        return {SecretFamily::CbdFixedHW, n, 0.5, h, eta};
    }
};

enum class ErrorFamily { Gaussian, Cbd };

struct ErrorSpec {
    ErrorFamily family = ErrorFamily::Gaussian;
    double sigma = 3.0;  // Gaussian
    int eta = 2;         // Cbd

    void validate() const {
        if (family == ErrorFamily::Gaussian && sigma <= 0.0)
            throw std::invalid_argument("need sigma > 0");
        if (family == ErrorFamily::Cbd && eta < 1)
            throw std::invalid_argument("need eta >= 1");
    }

    static ErrorSpec gaussian(double sigma) { return {ErrorFamily::Gaussian, sigma, 0}; }
    static ErrorSpec cbd(int eta) { return {ErrorFamily::Cbd, 0.0, eta}; }

    double variance() const {
        return family == ErrorFamily::Gaussian ? sigma * sigma : 0.5 * eta;
    }
};

inline i64 sample_cbd(int eta, Rng& rng) {
    i64 v = 0;
    for (int t = 0; t < eta; ++t)
        v += (i64)(rng.next() & 1) - (i64)(rng.next() >> 1 & 1);
    return v;
}

inline i64 sample_cbd_nonzero(int eta, Rng& rng) {
    for (;;) {
        i64 v = sample_cbd(eta, rng);
        if (v != 0) return v;
    }
}

/// Draw a secret from the named family. FixedHW variants always have
/// exactly h nonzero entries.
inline Vec sample_secret(const SecretSpec& spec, Rng& rng) {
    spec.validate();
    const int n = spec.n_total;
    Vec s(n, 0);
    switch (spec.family) {
        case SecretFamily::BinaryBernoulli:
            for (int i = 0; i < n; ++i) s[i] = rng.bernoulli(spec.p) ? 1 : 0;
            break;
        case SecretFamily::BinaryFixedHW: {
            for (int i : rng.sample_without_replacement(n, spec.h)) s[i] = 1;
            break;
        }
        case SecretFamily::TernaryBalanced:
            for (int i = 0; i < n; ++i) s[i] = rng.uniform_int(-1, 1);
            break;
        case SecretFamily::TernaryFixedHW: {
            for (int i : rng.sample_without_replacement(n, spec.h))
                s[i] = rng.bernoulli(0.5) ? 1 : -1;
            break;
        }
        case SecretFamily::Cbd:
            for (int i = 0; i < n; ++i) s[i] = sample_cbd(spec.eta, rng);
            break;
        case SecretFamily::CbdFixedHW: {
            // Raw CBD draw, then truncate (or promote) to exactly h nonzeros.
            for (int i = 0; i < n; ++i) s[i] = sample_cbd(spec.eta, rng);
            std::vector<int> nz, zero;
            for (int i = 0; i < n; ++i) (s[i] != 0 ? nz : zero).push_back(i);
            if ((int)nz.size() > spec.h) {
                rng.shuffle(nz);  // ties resolved uniformly
                for (int t = spec.h; t < (int)nz.size(); ++t) s[nz[t]] = 0;
            } else if ((int)nz.size() < spec.h) {
                rng.shuffle(zero);
                int need = spec.h - (int)nz.size();
                for (int t = 0; t < need; ++t)
                    s[zero[t]] = sample_cbd_nonzero(spec.eta, rng);
            }
            break;
        }
    }
    return s;
}

/// Length-m error vector. The Gaussian variant rounds a continuous
/// Gaussian to the nearest integer.
inline Vec sample_error(const ErrorSpec& spec, int m, Rng& rng) {
    spec.validate();
    if (m < 1) throw std::invalid_argument("error length must be >= 1");
    Vec e(m);
    if (spec.family == ErrorFamily::Gaussian) {
        for (int i = 0; i < m; ++i) e[i] = (i64)std::llround(rng.gaussian(spec.sigma));
    } else {
        for (int i = 0; i < m; ++i) e[i] = sample_cbd(spec.eta, rng);
    }
    return e;
}

struct LweTruth {
    Vec s;
    Vec e;
};

struct LweInstance {
    Mat A;  // m x n, centered residues
    Vec b;  // length m, centered residues
    i64 q = 0;
    SecretSpec secret_spec;
    ErrorSpec error_spec;
    std::optional<LweTruth> truth;

    int m() const { return (int)A.size(); }
    int n() const { return A.empty() ? 0 : (int)A[0].size(); }

    /// b == A s + e (mod q) entrywise, when the truth is present.
    bool truth_consistent() const {
        if (!truth) return true;
        for (int i = 0; i < m(); ++i) {
            i64 acc = dot(A[i], truth->s) + truth->e[i];
            if (center_mod(acc - b[i], q) != 0) return false;
        }
        return true;
    }
};

inline LweInstance gen_lwe(int n, int m, i64 q, const SecretSpec& secret_spec,
                           const ErrorSpec& error_spec, std::uint64_t seed) {
    Rng rng(seed);
    LweInstance inst;
    inst.q = q;
    inst.secret_spec = secret_spec;
    inst.error_spec = error_spec;
    inst.A.assign(m, Vec(n));
    for (auto& row : inst.A)
        for (auto& x : row) x = center_mod(rng.uniform_mod(q), q);
    Vec s = sample_secret(secret_spec, rng);
    Vec e = sample_error(error_spec, m, rng);
    inst.b.resize(m);
    for (int i = 0; i < m; ++i) inst.b[i] = center_mod(dot(inst.A[i], s) + e[i], q);
    inst.truth = LweTruth{std::move(s), std::move(e)};
    return inst;
}

/// Ring-LWE instance: k polynomial samples over Z_q[x]/(x^n+1).
struct RlweInstance {
    int n = 0;  // ring degree, power of two
    i64 q = 0;
    std::vector<Vec> a;  // k public polynomials
    std::vector<Vec> b;  // k outputs
    SecretSpec secret_spec;
    ErrorSpec error_spec;
    std::optional<Vec> s;               // degree-n secret polynomial
    std::optional<std::vector<Vec>> e;  // k error polynomials
};

/// Module-LWE instance of rank ell with k samples.
struct MlweInstance {
    int n = 0;
    int ell = 1;
    int k = 1;
    i64 q = 0;
    std::vector<std::vector<Vec>> a;  // a[i][j], i < k, j < ell
    std::vector<Vec> b;               // k outputs
    SecretSpec secret_spec;
    ErrorSpec error_spec;
    std::optional<std::vector<Vec>> s;  // ell secret polynomials
    std::optional<std::vector<Vec>> e;  // k error polynomials
};

inline bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

inline MlweInstance gen_mlwe(int n, int ell, int k, i64 q, const SecretSpec& secret_spec,
                             const ErrorSpec& error_spec, std::uint64_t seed) {
    if (!is_power_of_two(n)) throw std::invalid_argument("ring degree must be a power of two");
    if (secret_spec.n_total != ell * n)
        throw std::invalid_argument("secret_spec.n_total must equal ell * n");
    Rng rng(seed);
    MlweInstance inst;
    inst.n = n;
    inst.ell = ell;
    inst.k = k;
    inst.q = q;
    inst.secret_spec = secret_spec;
    inst.error_spec = error_spec;
    Vec s_flat = sample_secret(secret_spec, rng);
    std::vector<Vec> s(ell);
    for (int j = 0; j < ell; ++j)
        s[j] = Vec(s_flat.begin() + (std::size_t)j * n, s_flat.begin() + (std::size_t)(j + 1) * n);
    inst.a.assign(k, std::vector<Vec>(ell));
    inst.b.assign(k, Vec());
    std::vector<Vec> e(k);
    for (int i = 0; i < k; ++i) {
        e[i] = sample_error(error_spec, n, rng);
        Vec acc(n, 0);
        for (int j = 0; j < ell; ++j) {
            Vec& aij = inst.a[i][j];
            aij.resize(n);
            for (auto& x : aij) x = center_mod(rng.uniform_mod(q), q);
            Vec prod = poly_mult_negacyclic(aij, s[j]);
            for (int t = 0; t < n; ++t) acc[t] += prod[t];
        }
        inst.b[i].resize(n);
        for (int t = 0; t < n; ++t) inst.b[i][t] = center_mod(acc[t] + e[i][t], q);
    }
    inst.s = std::move(s);
    inst.e = std::move(e);
    return inst;
}

inline RlweInstance gen_rlwe(int n, int k, i64 q, const SecretSpec& secret_spec,
                             const ErrorSpec& error_spec, std::uint64_t seed) {
    MlweInstance m = gen_mlwe(n, 1, k, q, secret_spec, error_spec, seed);
    RlweInstance r;
    r.n = n;
    r.q = q;
    r.secret_spec = secret_spec;
    r.error_spec = error_spec;
    for (int i = 0; i < k; ++i) {
        r.a.push_back(m.a[i][0]);
        r.b.push_back(m.b[i]);
    }
    if (m.s) r.s = (*m.s)[0];
    if (m.e) r.e = *m.e;
    return r;
}

inline MlweInstance rlwe_as_mlwe(const RlweInstance& r) {
    MlweInstance m;
    m.n = r.n;
    m.ell = 1;
    m.k = (int)r.a.size();
    m.q = r.q;
    m.secret_spec = r.secret_spec;
    m.error_spec = r.error_spec;
    m.a.assign(m.k, std::vector<Vec>(1));
    for (int i = 0; i < m.k; ++i) {
        m.a[i][0] = r.a[i];
        m.b.push_back(r.b[i]);
    }
    if (r.s) m.s = std::vector<Vec>{*r.s};
    if (r.e) m.e = *r.e;
    return m;
}

/// Expand an MLWE instance into plain LWE with the kn x (ell n)
/// block-negacyclic public matrix.
inline LweInstance mlwe_to_lwe(const MlweInstance& inst) {
    const int n = inst.n, ell = inst.ell, k = inst.k;
    LweInstance out;
    out.q = inst.q;
    out.secret_spec = inst.secret_spec;
    out.error_spec = inst.error_spec;
    out.A.assign((std::size_t)k * n, Vec((std::size_t)ell * n, 0));
    out.b.resize((std::size_t)k * n);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < ell; ++j) {
            Mat blk = negacyclic_matrix(inst.a[i][j]);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    out.A[(std::size_t)i * n + r][(std::size_t)j * n + c] = blk[r][c];
        }
        for (int r = 0; r < n; ++r) out.b[(std::size_t)i * n + r] = inst.b[i][r];
    }
    if (inst.s && inst.e) {
        Vec s_flat, e_flat;
        for (const Vec& sj : *inst.s) s_flat.insert(s_flat.end(), sj.begin(), sj.end());
        for (const Vec& ei : *inst.e) e_flat.insert(e_flat.end(), ei.begin(), ei.end());
        out.truth = LweTruth{std::move(s_flat), std::move(e_flat)};
    }
    return out;
}

inline LweInstance rlwe_to_lwe(const RlweInstance& inst) {
    return mlwe_to_lwe(rlwe_as_mlwe(inst));
}

}  // namespace nomod

#endif
