#ifndef NOMOD_PIPELINE_HPP
#define NOMOD_PIPELINE_HPP

#include <chrono>
#include <future>
#include <set>

#include "nomod/core.hpp"
#include "nomod/estimators.hpp"
#include "nomod/instances.hpp"
#include "nomod/mlwe_enhance.hpp"
#include "nomod/nomod_approx.hpp"
#include "nomod/reduction.hpp"

namespace nomod {

// End-to-end orchestration: instance generation, per-matrix reduction
// fan-out, sample amplification, sigma-ranked subset training.

enum class InstanceKind { Lwe, Rlwe, Mlwe };
enum class EstimatorKind { Ols, Huber, Ransac, Tukey };

struct PipelineConfig {
    InstanceKind kind = InstanceKind::Lwe;
    int n = 0;    // LWE dimension, or ring degree for RLWE/MLWE
    int ell = 1;  // module rank
    int k = 1;    // polynomial sample count (ring kinds)
    i64 q = 0;
    SecretSpec secret_spec;
    ErrorSpec error_spec;
    i64 omega = 0;  // 0 = pick by error family
    ReductionConfig reduction;
    int l = 2;           // reduced matrices
    std::size_t t = 50;  // pool capacity per matrix
    int m_override = 0;  // 0 = closed-form sample count
    double train_fraction = 0.75;
    EstimatorKind estimator = EstimatorKind::Tukey;
    double huber_eps = 0.0;  // 0 = MAD-derived
    double tukey_c = 0.0;
    int ransac_subset = 0;  // 0 = dims
    int ransac_trials = 64;
    double ransac_tol = 0.0;  // 0 = 3 sigma_e
    double t_sigma = 4.0;
    double tau = 1.5;
    std::uint64_t seed = 1;
    int workers = 1;
    bool interleaved = true;

    int secret_dims() const { return kind == InstanceKind::Lwe ? n : ell * n; }

    i64 effective_omega() const {
        if (omega > 0) return omega;
        return error_spec.family == ErrorFamily::Cbd ? 4 : 10;
    }

    void validate() const {
        if (n < 1 || q < 2) throw std::invalid_argument("pipeline: bad n or q");
        if (l < 1) throw std::invalid_argument("pipeline: need l >= 1");
        if (train_fraction <= 0.0 || train_fraction > 1.0)
            throw std::invalid_argument("pipeline: need 0 < train_fraction <= 1");
        if (kind != InstanceKind::Lwe && !is_power_of_two(n))
            throw std::invalid_argument("pipeline: ring degree must be a power of two");
        secret_spec.validate();
        error_spec.validate();
        reduction.validate();
    }
};

/// One amplified sample: embedded-space vector (omega r | y) with its
/// pre-modular target and priority moments.
struct Sample {
    Vec v;  // width m_rows + secret_dims
    double sigma = 0.0;
    double mu = 0.0;
    i64 target = 0;  // centered
    int source_matrix = 0;
    int source_row = 0;  // pool rank within its matrix
    i64 orbit_t = 0;
    std::optional<i64> btilde_true;  // y.s + r.e when the truth is known
};

inline MomentEstimate sample_moments(const Vec& v, int m_rows, const SecretSpec& secret_spec,
                                     const ErrorSpec& error_spec, i64 omega) {
    Vec y(v.begin() + m_rows, v.end());
    MomentEstimate a = as_moments(row_stats(y), secret_spec, secret_spec.n_total);
    double r_norm2 = 0.0;
    for (int i = 0; i < m_rows; ++i) {
        double r = (double)v[i] / (double)omega;
        r_norm2 += r * r;
    }
    return {a.mu, a.var + r_norm2 * error_spec.variance()};
}

struct GeneratedInstance {
    LweInstance flat;                 // always present, truth included
    std::optional<MlweInstance> ring;  // ring kinds only
};

inline GeneratedInstance generate_instance(const PipelineConfig& cfg) {
    cfg.validate();
    GeneratedInstance g;
    std::uint64_t s = substream(cfg.seed, 0);
    if (cfg.kind == InstanceKind::Lwe) {
        if (cfg.secret_spec.n_total != cfg.n)
            throw std::invalid_argument("pipeline: secret dimension must equal n");
        g.flat = gen_lwe(cfg.n, 4 * cfg.n, cfg.q, cfg.secret_spec, cfg.error_spec, s);
    } else {
        int ell = cfg.kind == InstanceKind::Rlwe ? 1 : cfg.ell;
        g.ring = gen_mlwe(cfg.n, ell, cfg.k, cfg.q, cfg.secret_spec, cfg.error_spec, s);
        g.flat = mlwe_to_lwe(*g.ring);
    }
    return g;
}

struct MatrixResult {
    std::vector<PoolEntry> pool;
    Vec b_targets;                         // per kept row, pre-modular target
    std::vector<std::pair<int, i64>> meta;  // ring: (block_id, rotation) per kept row
    Vec e_targets;                          // per kept row, for truth bookkeeping (lwe)
    Mat basis;                              // final reduced basis
    int m_rows = 0;
    bool ok = false;
    std::string error;
    double sum_ra2 = 0.0;  // sum of squared RA entries over informative basis rows
    i64 ra_count = 0;
    double basis_sigma_sum = 0.0;  // sum of row priorities over informative basis rows
    i64 basis_rows = 0;
};

inline int optimal_rows(const PipelineConfig& cfg) {
    if (cfg.m_override > 0) return cfg.m_override;
    int nk_n = cfg.n, nk_k = cfg.kind == InstanceKind::Mlwe ? cfg.ell : 1;
    auto r = optimal_sample_count(nk_n, nk_k, cfg.q, cfg.effective_omega(),
                                  std::max(2, cfg.reduction.block_cap));
    i64 m = r.m;
    if (cfg.kind == InstanceKind::Lwe)
        m = std::min<i64>(m, 4LL * cfg.n);
    else
        m = std::min<i64>(m, (i64)cfg.k * cfg.n);  // sign-distinct rotation rows
    return (int)std::max<i64>(m, 1);
}

/// Reduce one matrix: subsample (plain LWE) or assemble-and-prune (ring),
/// embed, progressively reduce, harvest the pool.
inline MatrixResult reduce_matrix(const PipelineConfig& cfg, const GeneratedInstance& gi,
                                  int matrix_id, int m_rows) {
    MatrixResult out;
    out.m_rows = m_rows;
    ReductionConfig rcfg = cfg.reduction;
    rcfg.pool_capacity = cfg.t;
    ShortVectorPool pool(cfg.t);
    Mat A_sub;
    try {
        if (cfg.kind == InstanceKind::Lwe) {
            Rng rng(substream(cfg.seed, 1000 + (std::uint64_t)matrix_id));
            std::vector<int> idx = rng.sample_without_replacement(gi.flat.m(), m_rows);
            out.b_targets.resize(m_rows);
            out.e_targets.assign(m_rows, 0);
            for (int i = 0; i < m_rows; ++i) {
                A_sub.push_back(gi.flat.A[idx[i]]);
                out.b_targets[i] = gi.flat.b[idx[i]];
                if (gi.flat.truth) out.e_targets[i] = gi.flat.truth->e[idx[i]];
            }
        } else {
            const MlweInstance& ring = *gi.ring;
            int n = ring.n, n_blocks = ring.k;
            int raw = ((m_rows + n - 1) / n) * n;
            int g = m_rows % n;
            auto offsets = offset_schedule(n, m_rows, n_blocks,
                                           substream(cfg.seed, 2000 + (std::uint64_t)matrix_id));
            AssembledMatrix am = assemble_matrix(ring.a, n, raw, matrix_id, offsets);
            std::vector<AssembledRow> rows = am.rows;
            if (g != 0) {
                auto [kept, bk] = project_and_prune(rows, g, n);
                rows = std::move(kept);
            }
            out.b_targets.resize((int)rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                A_sub.push_back(rows[i].row);
                out.meta.emplace_back(rows[i].block_id, rows[i].rotation);
                out.b_targets[i] = rotation_target(ring.b[rows[i].block_id], rows[i].rotation);
            }
            out.m_rows = (int)rows.size();
        }
        for (auto& row : A_sub)
            for (auto& x : row) x = center_mod(x, cfg.q);
        EmbeddedBasis eb = embed(A_sub, cfg.effective_omega(), cfg.q);
        progressive_reduce(eb, rcfg, pool, cfg.secret_spec, cfg.error_spec, matrix_id);
        out.basis = eb.B;
        for (const Vec& row : eb.B) {
            bool informative = false;
            for (int j = eb.m; j < eb.dim(); ++j)
                if (row[j] != 0) { informative = true; break; }
            if (!informative) continue;  // zero y-block, not a sample
            out.basis_sigma_sum +=
                row_priority(row, cfg.secret_spec, cfg.error_spec, eb.omega, eb.m);
            ++out.basis_rows;
            for (int j = eb.m; j < eb.dim(); ++j) {
                out.sum_ra2 += (double)row[j] * (double)row[j];
                ++out.ra_count;
            }
        }
        out.pool = pool.entries();
        out.ok = true;
    } catch (const std::exception& ex) {
        out.ok = false;
        out.error = ex.what();
    }
    return out;
}

/// Expand one pool entry into store samples. Plain LWE yields one sample;
/// ring kinds yield the distinct members of the negative-circulant orbit.
inline std::vector<Sample> samples_from_entry(const PipelineConfig& cfg,
                                              const GeneratedInstance& gi,
                                              const MatrixResult& mr, const PoolEntry& e,
                                              int matrix_id, int rank) {
    std::vector<Sample> out;
    int m = mr.m_rows;
    i64 omega = cfg.effective_omega();
    int N = (int)e.v.size() - m;
    Vec r(m);
    for (int i = 0; i < m; ++i) r[i] = e.v[i] / omega;
    if (cfg.kind == InstanceKind::Lwe) {
        Sample s;
        s.v = e.v;
        i128 tgt = 0;
        for (int i = 0; i < m; ++i) tgt += (i128)r[i] * mr.b_targets[i];
        s.target = center_mod((i64)tgt, cfg.q);
        MomentEstimate me = sample_moments(s.v, m, cfg.secret_spec, cfg.error_spec, omega);
        s.sigma = std::sqrt(me.var);
        s.mu = me.mu;
        s.source_matrix = matrix_id;
        s.source_row = rank;
        s.orbit_t = 0;
        if (gi.flat.truth) {
            Vec y(s.v.begin() + m, s.v.end());
            i64 bt = dot(y, gi.flat.truth->s) + dot(r, mr.e_targets);
            s.btilde_true = bt;
        }
        out.push_back(std::move(s));
        return out;
    }
    const MlweInstance& ring = *gi.ring;
    int n = ring.n;
    Vec y(e.v.begin() + m, e.v.end());
    int blocks = N / n;
    std::set<Vec> seen;
    for (i64 t = 0; t < n; ++t) {
        Vec yt;
        yt.reserve(N);
        for (int bl = 0; bl < blocks; ++bl) {
            Vec sub(y.begin() + (std::size_t)bl * n, y.begin() + (std::size_t)(bl + 1) * n);
            Vec rot = rotate_negacyclic(sub, t);
            yt.insert(yt.end(), rot.begin(), rot.end());
        }
        if (!seen.insert(yt).second) continue;
        Sample s;
        s.v = e.v;
        std::copy(yt.begin(), yt.end(), s.v.begin() + m);
        // rotating the row functional by x^t pairs it with x^{u - t} targets
        i128 tgt = 0;
        for (int i = 0; i < m; ++i) {
            auto [blk, u] = mr.meta[i];
            tgt += (i128)r[i] * rotation_target(ring.b[blk], u - t);
        }
        s.target = center_mod((i64)tgt, cfg.q);
        MomentEstimate me = sample_moments(s.v, m, cfg.secret_spec, cfg.error_spec, omega);
        s.sigma = std::sqrt(me.var);
        s.mu = me.mu;
        s.source_matrix = matrix_id;
        s.source_row = rank;
        s.orbit_t = t;
        if (gi.flat.truth && ring.e) {
            i64 bt = dot(yt, gi.flat.truth->s);
            for (int i = 0; i < m; ++i) {
                auto [blk, u] = mr.meta[i];
                bt += r[i] * rotation_target((*ring.e)[blk], u - t);
            }
            s.btilde_true = bt;
        }
        out.push_back(std::move(s));
    }
    return out;
}

struct PreprocessResult {
    std::vector<Sample> store;
    int m_rows = 0;
    int matrices_ok = 0;
    int matrices_failed = 0;
    std::vector<std::string> warnings;
    double sigma_A = 0.0;
    double sigma_RA = 0.0;
    double rho_A = 0.0;
    double pool_mean_sigma = 0.0;
    double basis_mean_sigma = 0.0;
};

inline void absorb_matrix(const PipelineConfig& cfg, const GeneratedInstance& gi,
                          const MatrixResult& mr, int matrix_id, PreprocessResult& pre,
                          double& ra2, i64& ra_n, double& pool_sig, i64& pool_n,
                          double& basis_sig, i64& basis_n) {
    if (!mr.ok) {
        ++pre.matrices_failed;
        pre.warnings.push_back("matrix " + std::to_string(matrix_id) + " skipped: " + mr.error);
        return;
    }
    ++pre.matrices_ok;
    ra2 += mr.sum_ra2;
    ra_n += mr.ra_count;
    basis_sig += mr.basis_sigma_sum;
    basis_n += mr.basis_rows;
    int rank = 0;
    for (const PoolEntry& e : mr.pool) {
        pool_sig += e.sigma;
        ++pool_n;
        auto batch = samples_from_entry(cfg, gi, mr, e, matrix_id, rank);
        for (auto& s : batch) pre.store.push_back(std::move(s));
        ++rank;
    }
}

struct TrainResult {
    bool recovered = false;
    Vec secret;
    VerificationReport verification;
    int subset_index = -1;
    int samples_used = 0;
    std::vector<std::size_t> ladder;
    bool ladder_degenerate = false;
    double predicted_inlier_rate = 0.0;
    double empirical_inlier_rate = -1.0;  // -1 when no truth available
    int fit_iterations = 0;
    bool fit_converged = false;
};

/// Nested subset sizes over the trainable prefix of the sigma-sorted store.
inline std::vector<std::size_t> subset_ladder(std::size_t pool, int n, double train_fraction,
                                              bool* degenerate = nullptr) {
    std::size_t cap = std::max<std::size_t>(1, (std::size_t)(train_fraction * (double)pool));
    if (degenerate) *degenerate = false;
    if (pool < (std::size_t)(2 * n)) {
        if (degenerate) *degenerate = true;
        return {cap};
    }
    std::vector<double> fracs = {0.05, 0.10, 0.25, 0.50, 0.75};
    std::vector<std::size_t> out;
    for (double f : fracs) {
        std::size_t sz = (std::size_t)(f * (double)pool);
        if (f == 0.05) sz = std::max<std::size_t>(sz, (std::size_t)(2 * n));
        sz = std::min(sz, cap);
        sz = std::max<std::size_t>(sz, 1);
        if (out.empty() || sz > out.back()) out.push_back(sz);
    }
    return out;
}

inline FitResult dispatch_fit(const PipelineConfig& cfg, const RegressionProblem& prob,
                              std::uint64_t seed) {
    switch (cfg.estimator) {
        case EstimatorKind::Ols: return fit_ols(prob);
        case EstimatorKind::Huber: return fit_huber(prob, cfg.huber_eps);
        case EstimatorKind::Tukey: return fit_tukey(prob, cfg.tukey_c);
        case EstimatorKind::Ransac: {
            int subset = cfg.ransac_subset > 0 ? cfg.ransac_subset : prob.dims();
            double tol = cfg.ransac_tol > 0.0
                             ? cfg.ransac_tol
                             : 3.0 * std::sqrt(cfg.error_spec.variance()) + 1.0;
            return fit_ransac(prob, subset, cfg.ransac_trials, tol, seed);
        }
    }
    return fit_ols(prob);
}

inline bool binary_family(SecretFamily f) {
    return f == SecretFamily::BinaryBernoulli || f == SecretFamily::BinaryFixedHW;
}

/// Sigma-ranked subset training loop: fit, quantize, verify, stop on accept.
inline TrainResult run_train(const PipelineConfig& cfg, const std::vector<Sample>& store,
                             const LweInstance& flat) {
    TrainResult tr;
    if (store.empty()) return tr;
    int N = cfg.secret_dims();
    std::vector<int> order(store.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return store[a].sigma < store[b].sigma; });
    tr.ladder = subset_ladder(store.size(), N, cfg.train_fraction, &tr.ladder_degenerate);

    for (std::size_t li = 0; li < tr.ladder.size(); ++li) {
        std::size_t M = tr.ladder[li];
        RegressionProblem prob;
        prob.X.resize((int)M, N);
        prob.y.resize((int)M);
        double pred = 0.0;
        int inliers = 0, truthy = 0;
        int m_rows = (int)store[order[0]].v.size() - N;
        for (std::size_t i = 0; i < M; ++i) {
            const Sample& s = store[order[i]];
            for (int j = 0; j < N; ++j) prob.X((int)i, j) = (double)s.v[m_rows + j];
            double target = (double)s.target;
            if (binary_family(cfg.secret_spec.family) && s.sigma > 0.0) {
                CandidateSet cs = candidates(s.target, {s.mu, s.sigma * s.sigma}, cfg.q,
                                             cfg.t_sigma);
                target = (double)cs.best().value;  // max-likelihood unwrap
            }
            prob.y((int)i) = target;
            pred += inlier_prob(cfg.q, s.sigma);
            if (s.btilde_true) {
                ++truthy;
                if (center_mod(*s.btilde_true, cfg.q) == *s.btilde_true) ++inliers;
            }
        }
        FitResult fit = dispatch_fit(cfg, prob, substream(cfg.seed, 3000 + li));
        if (fit.failed) continue;
        Vec cand = normalize_round_clip(fit.coeffs, cfg.secret_spec);
        VerificationReport rep = verify_secret(flat.A, flat.b, flat.q, cand, cfg.error_spec,
                                               cfg.tau);
        tr.subset_index = (int)li;
        tr.samples_used = (int)M;
        tr.predicted_inlier_rate = pred / (double)M;
        tr.empirical_inlier_rate = truthy > 0 ? (double)inliers / truthy : -1.0;
        tr.fit_iterations = fit.iterations;
        tr.fit_converged = fit.converged;
        if (rep.accept) {
            tr.recovered = true;
            tr.secret = cand;
            tr.verification = rep;
            return tr;
        }
        // keep the last rejected candidate for the report
        tr.secret = cand;
        tr.verification = rep;
    }
    return tr;
}

struct RunReport {
    bool recovered = false;
    Vec secret;
    TrainResult train;
    double rho_A = 0.0;
    double sigma_A = 0.0;
    double sigma_RA = 0.0;
    double pool_mean_sigma = 0.0;
    double basis_mean_sigma = 0.0;
    std::size_t store_size = 0;
    int m_rows = 0;
    int matrices_ok = 0;
    int matrices_failed = 0;
    double expected_inliers = 0.0;
    std::vector<std::string> warnings;
    double gen_ms = 0.0, preprocess_ms = 0.0, train_ms = 0.0;
};

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline PreprocessResult run_preprocess(const PipelineConfig& cfg, const GeneratedInstance& gi) {
    PreprocessResult pre;
    pre.m_rows = optimal_rows(cfg);
    double ra2 = 0.0, pool_sig = 0.0, basis_sig = 0.0;
    i64 ra_n = 0, pool_n = 0, basis_n = 0;

    std::vector<MatrixResult> results((std::size_t)cfg.l);
    if (cfg.workers > 1) {
        std::vector<std::future<MatrixResult>> futs;
        for (int mid = 0; mid < cfg.l; ++mid)
            futs.push_back(std::async(std::launch::async, reduce_matrix, std::cref(cfg),
                                      std::cref(gi), mid, pre.m_rows));
        for (int mid = 0; mid < cfg.l; ++mid) results[mid] = futs[mid].get();
    } else {
        for (int mid = 0; mid < cfg.l; ++mid)
            results[mid] = reduce_matrix(cfg, gi, mid, pre.m_rows);
    }
    for (int mid = 0; mid < cfg.l; ++mid)
        absorb_matrix(cfg, gi, results[mid], mid, pre, ra2, ra_n, pool_sig, pool_n, basis_sig,
                      basis_n);
    if (pre.matrices_ok == 0) throw std::runtime_error("preprocess: every matrix failed");

    double a2 = 0.0;
    i64 a_n = 0;
    for (const Vec& row : gi.flat.A)
        for (i64 x : row) {
            a2 += (double)x * x;
            ++a_n;
        }
    pre.sigma_A = a_n ? std::sqrt(a2 / a_n) : 0.0;
    pre.sigma_RA = ra_n ? std::sqrt(ra2 / ra_n) : 0.0;
    pre.rho_A = pre.sigma_A > 0.0 ? pre.sigma_RA / pre.sigma_A : 0.0;
    pre.pool_mean_sigma = pool_n ? pool_sig / pool_n : 0.0;
    pre.basis_mean_sigma = basis_n ? basis_sig / basis_n : 0.0;
    return pre;
}

inline RunReport run_full(const PipelineConfig& cfg) {
    cfg.validate();
    RunReport rep;
    auto t0 = std::chrono::steady_clock::now();
    GeneratedInstance gi = generate_instance(cfg);
    rep.gen_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    PreprocessResult pre;
    pre.m_rows = optimal_rows(cfg);
    double ra2 = 0.0, pool_sig = 0.0, basis_sig = 0.0;
    i64 ra_n = 0, pool_n = 0, basis_n = 0;
    bool early = false;
    std::vector<MatrixResult> results((std::size_t)cfg.l);
    if (cfg.workers > 1) {
        std::vector<std::future<MatrixResult>> futs;
        for (int mid = 0; mid < cfg.l; ++mid)
            futs.push_back(std::async(std::launch::async, reduce_matrix, std::cref(cfg),
                                      std::cref(gi), mid, pre.m_rows));
        for (int mid = 0; mid < cfg.l; ++mid) results[mid] = futs[mid].get();
        for (int mid = 0; mid < cfg.l; ++mid)
            absorb_matrix(cfg, gi, results[mid], mid, pre, ra2, ra_n, pool_sig, pool_n,
                          basis_sig, basis_n);
    } else {
        for (int mid = 0; mid < cfg.l && !early; ++mid) {
            results[mid] = reduce_matrix(cfg, gi, mid, pre.m_rows);
            absorb_matrix(cfg, gi, results[mid], mid, pre, ra2, ra_n, pool_sig, pool_n,
                          basis_sig, basis_n);
            if (cfg.interleaved && mid + 1 < cfg.l && !pre.store.empty()) {
                // early attempt while later matrices are still pending
                TrainResult t = run_train(cfg, pre.store, gi.flat);
                if (t.recovered) {
                    rep.train = t;
                    early = true;
                }
            }
        }
    }
    if (pre.matrices_ok == 0) throw std::runtime_error("preprocess: every matrix failed");
    double a2 = 0.0;
    i64 a_n = 0;
    for (const Vec& row : gi.flat.A)
        for (i64 x : row) {
            a2 += (double)x * x;
            ++a_n;
        }
    pre.sigma_A = a_n ? std::sqrt(a2 / a_n) : 0.0;
    pre.sigma_RA = ra_n ? std::sqrt(ra2 / ra_n) : 0.0;
    pre.rho_A = pre.sigma_A > 0.0 ? pre.sigma_RA / pre.sigma_A : 0.0;
    pre.pool_mean_sigma = pool_n ? pool_sig / pool_n : 0.0;
    pre.basis_mean_sigma = basis_n ? basis_sig / basis_n : 0.0;
    rep.preprocess_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    if (!early) rep.train = run_train(cfg, pre.store, gi.flat);
    rep.train_ms = ms_since(t0);

    rep.recovered = rep.train.recovered;
    if (rep.recovered) rep.secret = rep.train.secret;
    rep.rho_A = pre.rho_A;
    rep.sigma_A = pre.sigma_A;
    rep.sigma_RA = pre.sigma_RA;
    rep.pool_mean_sigma = pre.pool_mean_sigma;
    rep.basis_mean_sigma = pre.basis_mean_sigma;
    rep.store_size = pre.store.size();
    rep.m_rows = pre.m_rows;
    rep.matrices_ok = pre.matrices_ok;
    rep.matrices_failed = pre.matrices_failed;
    rep.warnings = pre.warnings;
    std::vector<double> sigmas;
    sigmas.reserve(pre.store.size());
    for (const Sample& s : pre.store) sigmas.push_back(s.sigma);
    rep.expected_inliers = expected_inliers(sigmas, cfg.q);
    return rep;
}

}  // namespace nomod

#endif
