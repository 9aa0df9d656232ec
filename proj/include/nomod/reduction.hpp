#ifndef NOMOD_REDUCTION_HPP
#define NOMOD_REDUCTION_HPP

#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "nomod/core.hpp"
#include "nomod/instances.hpp"
#include "nomod/nomod_approx.hpp"

namespace nomod {

// ---------------------------------------------------------------------------
// Gram-Schmidt data (double precision over an exact integer basis)
// ---------------------------------------------------------------------------

struct Gso {
    std::vector<std::vector<double>> mu;  // lower triangular, mu[i][j] for j < i
    std::vector<double> bstar2;           // squared Gram-Schmidt norms

    void compute(const Mat& B, int rows) {
        int d = rows, w = (int)B[0].size();
        mu.assign(d, std::vector<double>(d, 0.0));
        bstar2.assign(d, 0.0);
        std::vector<std::vector<double>> bstar(d, std::vector<double>(w));
        for (int i = 0; i < d; ++i) {
            for (int c = 0; c < w; ++c) bstar[i][c] = (double)B[i][c];
            for (int j = 0; j < i; ++j) {
                double num = 0.0;
                for (int c = 0; c < w; ++c) num += (double)B[i][c] * bstar[j][c];
                double m = (bstar2[j] > 0.0) ? num / bstar2[j] : 0.0;
                mu[i][j] = m;
                for (int c = 0; c < w; ++c) bstar[i][c] -= m * bstar[j][c];
            }
            double nrm = 0.0;
            for (int c = 0; c < w; ++c) nrm += bstar[i][c] * bstar[i][c];
            bstar2[i] = nrm;
        }
        mu.resize(d);
        for (int i = 0; i < d; ++i) mu[i][i] = 1.0;
    }

    bool finite() const {
        for (double b : bstar2)
            if (!(b > 0.0) || !std::isfinite(b)) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Elementary unimodular row operations, mirrored on an optional transform
// ---------------------------------------------------------------------------

inline void row_addmul(Mat& B, Mat* U, int dst, int src, i64 c) {
    if (c == 0) return;
    Vec& d = B[dst];
    const Vec& s = B[src];
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += c * s[i];
    if (U) {
        Vec& du = (*U)[dst];
        const Vec& su = (*U)[src];
        for (std::size_t i = 0; i < du.size(); ++i) du[i] += c * su[i];
    }
}

inline void row_swap(Mat& B, Mat* U, int a, int b) {
    std::swap(B[a], B[b]);
    if (U) std::swap((*U)[a], (*U)[b]);
}

inline void row_negate(Mat& B, Mat* U, int a) {
    for (auto& x : B[a]) x = -x;
    if (U)
        for (auto& x : (*U)[a]) x = -x;
}

// ---------------------------------------------------------------------------
// LLL
// ---------------------------------------------------------------------------

/// In-place LLL on the first `rows` rows of B (all rows when rows < 0).
/// Size reduction |mu_ij| <= 1/2 and the Lovasz condition hold on exit.
/// Throws on unrecoverable precision failure.
inline void lll_reduce(Mat& B, Mat* U, double delta, int rows = -1) {
    if (delta <= 0.25 || delta > 1.0) throw std::invalid_argument("lll: need 0.25 < delta <= 1");
    int d = rows < 0 ? (int)B.size() : rows;
    if (d <= 1) return;
    Gso g;
    g.compute(B, d);
    if (!g.finite()) throw std::runtime_error("lll: degenerate input basis");

    auto size_reduce_row = [&](int k) {
        for (int j = k - 1; j >= 0; --j) {
            i64 c = (i64)std::llround(g.mu[k][j]);
            if (c == 0) continue;
            row_addmul(B, U, k, j, -c);
            for (int l = 0; l < j; ++l) g.mu[k][l] -= (double)c * g.mu[j][l];
            g.mu[k][j] -= (double)c;
        }
    };

    int k = 1, swaps = 0, recomputes = 0;
    while (k < d) {
        size_reduce_row(k);
        double lhs = g.bstar2[k];
        double m = g.mu[k][k - 1];
        if (lhs >= (delta - m * m) * g.bstar2[k - 1]) {
            ++k;
            continue;
        }
        row_swap(B, U, k - 1, k);
        // incremental GSO update for the swap
        double bk = g.bstar2[k] + m * m * g.bstar2[k - 1];
        if (!(bk > 0.0) || !std::isfinite(bk)) {
            g.compute(B, d);  // re-orthogonalize and retry
            if (!g.finite()) throw std::runtime_error("lll: precision failure");
            k = 1;
            continue;
        }
        double mu_new = m * g.bstar2[k - 1] / bk;
        g.bstar2[k] = g.bstar2[k - 1] * g.bstar2[k] / bk;
        g.bstar2[k - 1] = bk;
        for (int j = 0; j < k - 1; ++j) std::swap(g.mu[k - 1][j], g.mu[k][j]);
        g.mu[k][k - 1] = mu_new;
        for (int i = k + 1; i < d; ++i) {
            double t = g.mu[i][k];
            g.mu[i][k] = g.mu[i][k - 1] - m * t;
            g.mu[i][k - 1] = t + mu_new * g.mu[i][k];
        }
        if (++swaps % 50 == 0) {
            g.compute(B, d);  // periodic full re-orthogonalization
            ++recomputes;
            if (!g.finite()) throw std::runtime_error("lll: precision failure");
        }
        k = std::max(k - 1, 1);
    }
}

/// Size-reduction check for tests: |mu_ij| <= 1/2 + tol for all j < i.
inline bool is_size_reduced(const Mat& B, double tol = 1e-6) {
    Gso g;
    g.compute(B, (int)B.size());
    for (int i = 0; i < (int)B.size(); ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(g.mu[i][j]) > 0.5 + tol) return false;
    return true;
}

inline bool satisfies_lovasz(const Mat& B, double delta, double tol = 1e-9) {
    Gso g;
    g.compute(B, (int)B.size());
    for (int i = 1; i < (int)B.size(); ++i) {
        double m = g.mu[i][i - 1];
        if (g.bstar2[i] + tol * g.bstar2[i - 1] < (delta - m * m) * g.bstar2[i - 1] - tol)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Schnorr-Euchner enumeration
// ---------------------------------------------------------------------------

struct BlockGso {
    std::vector<std::vector<double>> mu;  // mu[i][j], j < i, block-local
    std::vector<double> bstar2;
    int dim() const { return (int)bstar2.size(); }
};

inline BlockGso block_gso(const Gso& g, int from, int to) {
    BlockGso b;
    int d = to - from;
    b.mu.assign(d, std::vector<double>(d, 0.0));
    b.bstar2.assign(d, 0.0);
    for (int i = 0; i < d; ++i) {
        b.bstar2[i] = g.bstar2[from + i];
        for (int j = 0; j < i; ++j) b.mu[i][j] = g.mu[from + i][from + j];
        b.mu[i][i] = 1.0;
    }
    return b;
}

struct EnumResult {
    Vec coeffs;      // block-local coefficients of the found vector
    double norm2;    // squared projected norm
    bool truncated;  // node budget was hit before the tree was exhausted
};

/// Shortest nonzero vector of the projected block lattice with squared
/// norm <= radius2, or nullopt when no such vector exists. No pruning.
inline std::optional<EnumResult> enumerate_svp(const BlockGso& g, double radius2,
                                               i64 max_nodes = 3'000'000) {
    const int d = g.dim();
    if (d <= 0) return std::nullopt;
    double best = radius2 * (1.0 + 1e-9);
    Vec best_x;
    Vec x(d, 0);
    i64 nodes = 0;
    bool truncated = false;

    // recursive descent; centers recomputed per node (desk-scale blocks)
    auto rec = [&](auto&& self, int i, double partial) -> void {
        if (truncated) return;
        if (++nodes > max_nodes) { truncated = true; return; }
        double c = 0.0;
        for (int j = i + 1; j < d; ++j) c -= (double)x[j] * g.mu[j][i];
        i64 x0 = (i64)std::llround(c);
        i64 delta = (c >= (double)x0) ? 1 : -1;
        for (i64 step = 0;; ++step) {
            i64 xi;
            if (step == 0) xi = x0;
            else if (step % 2 == 1) xi = x0 + delta * ((step + 1) / 2);
            else xi = x0 - delta * (step / 2);
            double diff = (double)xi - c;
            double term = diff * diff * g.bstar2[i];
            if (partial + term >= best) break;  // distances are monotone in the zigzag
            x[i] = xi;
            if (i == 0) {
                bool zero = true;
                for (i64 v : x)
                    if (v != 0) { zero = false; break; }
                if (!zero) {
                    best = partial + term;
                    best_x = x;
                }
            } else {
                self(self, i - 1, partial + term);
                if (truncated) return;
            }
        }
        x[i] = 0;
    };

    // top level: x[d-1] >= 0 suffices up to global sign
    {
        int i = d - 1;
        for (i64 xi = 0;; ++xi) {
            double term = (double)xi * (double)xi * g.bstar2[i];
            if (term >= best) break;
            x[i] = xi;
            if (i == 0) {
                if (xi != 0 && term < best) { best = term; best_x = x; }
            } else {
                rec(rec, i - 1, term);
            }
            if (truncated) break;
        }
        x[i] = 0;
    }

    if (best_x.empty()) return std::nullopt;
    return EnumResult{std::move(best_x), best, truncated};
}

// ---------------------------------------------------------------------------
// BKZ tour with insertion via unimodular combination
// ---------------------------------------------------------------------------

/// Make row `pos` equal to sum x_i * row_{pos+i} through unimodular row
/// operations inside the block. Requires gcd of x equal to 1.
inline void insert_combination(Mat& B, Mat* U, int pos, const Vec& x_in) {
    Vec x = x_in;
    int d = (int)x.size();
    i64 g = 0;
    for (i64 v : x) g = std::gcd(g, std::llabs(v));
    if (g > 1)
        for (auto& v : x) v /= g;  // primitive representative of the same direction
    // Euclid on the coefficients: op row[b] += c*row[a] maps x[a] -= c*x[b]
    for (;;) {
        int nz = 0, a = -1;
        for (int i = 0; i < d; ++i)
            if (x[i] != 0) { ++nz; a = i; }
        if (nz <= 1) {
            if (a < 0 || (x[a] != 1 && x[a] != -1))
                throw std::runtime_error("insert_combination: imprimitive coefficients");
            if (x[a] == -1) row_negate(B, U, pos + a);
            if (a != 0) row_swap(B, U, pos, pos + a);
            return;
        }
        // reduce the largest coefficient with the smallest nonzero one
        int amax = -1, bmin = -1;
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0) continue;
            if (amax < 0 || std::llabs(x[i]) > std::llabs(x[amax])) amax = i;
        }
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0 || i == amax) continue;
            if (bmin < 0 || std::llabs(x[i]) < std::llabs(x[bmin])) bmin = i;
        }
        i64 c = (i64)std::llround((double)x[amax] / (double)x[bmin]);
        if (c == 0) c = (x[amax] > 0) == (x[bmin] > 0) ? 1 : -1;
        row_addmul(B, U, pos + bmin, pos + amax, c);
        x[amax] -= c * x[bmin];
    }
}

/// Classic Gaussian-heuristic length for a block of the given log-volume.
inline double block_gh_norm2(const BlockGso& g, int from, int to) {
    int d = to - from;
    double logvol = 0.0;
    for (int i = from; i < to; ++i) logvol += 0.5 * std::log(g.bstar2[i]);
    double log_gh = logvol / d + 0.5 * std::log((double)d / (2.0 * M_PI * M_E));
    return std::exp(2.0 * log_gh);
}

/// One BKZ tour: block SVP with LLL pre/post per block. Returns true iff
/// some insertion strictly shortened a Gram-Schmidt norm.
inline bool bkz_tour(Mat& B, Mat* U, int beta, double delta, i64 enum_node_cap = 3'000'000) {
    int d = (int)B.size();
    if (beta < 2 || beta > d) throw std::invalid_argument("bkz_tour: need 2 <= beta <= dim");
    bool improved = false;
    lll_reduce(B, U, delta);
    for (int j = 0; j + 1 < d; ++j) {
        int kend = std::min(j + beta, d);
        Gso g;
        g.compute(B, d);
        BlockGso blk = block_gso(g, j, kend);
        double gh2 = block_gh_norm2(blk, 0, kend - j);
        double radius2 = std::min(g.bstar2[j] * (1.0 - 1e-9), 1.05 * 1.05 * gh2);
        auto res = enumerate_svp(blk, radius2, enum_node_cap);
        if (!res) continue;
        const Vec& x = res->coeffs;
        bool is_e1 = (std::llabs(x[0]) == 1);
        for (std::size_t t = 1; t < x.size() && is_e1; ++t)
            if (x[t] != 0) is_e1 = false;
        if (is_e1) continue;
        if (res->norm2 >= g.bstar2[j] * (1.0 - 1e-9)) continue;
        insert_combination(B, U, j, x);
        lll_reduce(B, U, delta, kend);
        improved = true;
    }
    lll_reduce(B, U, delta);
    return improved;
}

// ---------------------------------------------------------------------------
// Polish: sort by norm, pairwise size-reduce to a fixpoint
// ---------------------------------------------------------------------------

inline void polish(Mat& B, Mat* U) {
    int d = (int)B.size();
    auto sort_rows = [&]() {
        // insertion sort so the transform follows the same swaps
        for (int i = 1; i < d; ++i)
            for (int j = i; j > 0 && norm2(B[j - 1]) > norm2(B[j]); --j) row_swap(B, U, j - 1, j);
    };
    sort_rows();
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < d; ++i) {
            i64 ni = norm2(B[i]);
            if (ni == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                i64 c = (i64)std::llround((double)dot(B[j], B[i]) / (double)ni);
                if (c == 0) continue;
                i64 before = norm2(B[j]);
                row_addmul(B, U, j, i, -c);
                if (norm2(B[j]) < before) {
                    changed = true;
                } else {
                    row_addmul(B, U, j, i, c);  // undo, no gain
                }
            }
        }
        if (changed) sort_rows();
    }
}

// ---------------------------------------------------------------------------
// Error-penalized dual embedding
// ---------------------------------------------------------------------------

struct EmbeddedBasis {
    Mat B;         // current basis, (m+n) x (m+n)
    Mat T;         // accumulated unimodular transform, B = T * original
    Mat original;  // frozen initial embedding
    i64 omega = 1;
    i64 q = 0;
    int m = 0;  // sample block size
    int n = 0;  // secret block size

    int dim() const { return m + n; }
};

/// Block embedding [[omega I_m, A], [0, q I_n]].
inline EmbeddedBasis embed(const Mat& A, i64 omega, i64 q) {
    if (omega < 1) throw std::invalid_argument("embed: need omega >= 1");
    EmbeddedBasis eb;
    eb.omega = omega;
    eb.q = q;
    eb.m = (int)A.size();
    eb.n = A.empty() ? 0 : (int)A[0].size();
    int d = eb.m + eb.n;
    eb.B.assign(d, Vec(d, 0));
    for (int i = 0; i < eb.m; ++i) {
        eb.B[i][i] = omega;
        for (int j = 0; j < eb.n; ++j) eb.B[i][eb.m + j] = A[i][j];
    }
    for (int j = 0; j < eb.n; ++j) eb.B[eb.m + j][eb.m + j] = q;
    eb.original = eb.B;
    eb.T.assign(d, Vec(d, 0));
    for (int i = 0; i < d; ++i) eb.T[i][i] = 1;
    return eb;
}

/// Exact membership test: row is an integer combination of the embedding
/// rows iff its sample block is divisible by omega and the residual of the
/// secret block is divisible by q.
inline bool in_embedded_lattice(const Vec& row, const Mat& A, i64 omega, i64 q) {
    int m = (int)A.size(), n = A.empty() ? 0 : (int)A[0].size();
    if ((int)row.size() != m + n) return false;
    Vec r(m);
    for (int i = 0; i < m; ++i) {
        if (row[i] % omega != 0) return false;
        r[i] = row[i] / omega;
    }
    for (int j = 0; j < n; ++j) {
        i128 acc = row[m + j];
        for (int i = 0; i < m; ++i) acc -= (i128)r[i] * A[i][j];
        if (acc % q != 0) return false;
    }
    return true;
}

/// sigma_b~ of the transformed sample carried by an embedded row
/// (omega r | y): Var(y . s) + ||r||^2 Var(e).
inline double row_priority(const Vec& row, const SecretSpec& secret_spec,
                           const ErrorSpec& error_spec, i64 omega, int m) {
    int n = (int)row.size() - m;
    double r_norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
        double r = (double)row[i] / (double)omega;
        r_norm2 += r * r;
    }
    Vec y(row.begin() + m, row.end());
    double var = as_moments(row_stats(y), secret_spec, secret_spec.n_total).var +
                 r_norm2 * error_spec.variance();
    return std::sqrt(var);
}

// ---------------------------------------------------------------------------
// Bounded deduplicated pool of short vectors
// ---------------------------------------------------------------------------

struct PoolEntry {
    double sigma;
    Vec v;  // sign-normalized embedded row
    int source_matrix;
    int tour;
};

inline Vec sign_normalize(Vec v) {
    for (i64 x : v) {
        if (x > 0) break;
        if (x < 0) {
            for (auto& y : v) y = -y;
            break;
        }
    }
    return v;
}

/// Bounded max-evicting collection of the lowest-sigma distinct vectors.
/// Ties on sigma break by lexicographic vector order, so merges are
/// order-independent.
class ShortVectorPool {
  public:
    explicit ShortVectorPool(std::size_t capacity) : capacity_(capacity) {
        if (capacity < 1) throw std::invalid_argument("pool capacity must be >= 1");
    }

    void offer(const Vec& row, double sigma, int source_matrix, int tour) {
        Vec v = sign_normalize(row);
        bool zero = true;
        for (i64 x : v)
            if (x != 0) { zero = false; break; }
        if (zero) return;
        Key k{sigma, v};
        if (members_.count(v)) return;
        if (entries_.size() >= capacity_) {
            auto last = std::prev(entries_.end());
            if (!(k < last->first)) return;
            members_.erase(last->first.v);
            entries_.erase(last);
        }
        members_.insert(v);
        entries_.emplace(std::move(k), PoolEntry{sigma, std::move(v), source_matrix, tour});
    }

    void merge(const ShortVectorPool& other) {
        for (const auto& [k, e] : other.entries_) offer(e.v, e.sigma, e.source_matrix, e.tour);
    }

    std::vector<PoolEntry> entries() const {
        std::vector<PoolEntry> out;
        out.reserve(entries_.size());
        for (const auto& [k, e] : entries_) out.push_back(e);
        return out;
    }

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }

    double mean_sigma() const {
        if (entries_.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& [k, e] : entries_) acc += e.sigma;
        return acc / (double)entries_.size();
    }

  private:
    struct Key {
        double sigma;
        Vec v;
        bool operator<(const Key& o) const {
            if (sigma != o.sigma) return sigma < o.sigma;
            return v < o.v;
        }
    };
    std::size_t capacity_;
    std::map<Key, PoolEntry> entries_;
    std::set<Vec> members_;
};

// ---------------------------------------------------------------------------
// Progressive reduction with vector saving
// ---------------------------------------------------------------------------

struct ReductionConfig {
    double delta_lll = 0.99;
    double delta_bkz = 0.99;
    int block_start = 20;
    int block_cap = 40;
    int block_increment = 10;
    int stall_tours = 4;
    int pre_passes = 4;  // LLL warm-up sweeps
    int tour_budget = 60;
    i64 enum_node_cap = 3'000'000;
    std::size_t pool_capacity = 50;

    void validate() const {
        if (block_cap < block_start) throw std::invalid_argument("block schedule must be nondecreasing");
        if (pool_capacity < 1) throw std::invalid_argument("pool capacity must be >= 1");
    }
};

/// LLL warm-up, then progressive BKZ tours with polish between tours.
/// Every tour offers all basis rows to the pool; block size grows by
/// `block_increment` after `stall_tours` tours without improvement.
inline void progressive_reduce(EmbeddedBasis& eb, const ReductionConfig& cfg,
                               ShortVectorPool& pool, const SecretSpec& secret_spec,
                               const ErrorSpec& error_spec, int source_matrix = 0) {
    cfg.validate();
    auto offer_all = [&](int tour) {
        for (const Vec& row : eb.B) {
            bool informative = false;  // zero y-block carries no sample
            for (int j = eb.m; j < eb.dim(); ++j)
                if (row[j] != 0) { informative = true; break; }
            if (!informative) continue;
            double s = row_priority(row, secret_spec, error_spec, eb.omega, eb.m);
            pool.offer(row, s, source_matrix, tour);
        }
    };
    for (int p = 0; p < cfg.pre_passes; ++p) lll_reduce(eb.B, &eb.T, cfg.delta_lll);
    offer_all(0);
    int beta = std::min(cfg.block_start, eb.dim());
    int stall = 0;
    for (int tour = 1; tour <= cfg.tour_budget; ++tour) {
        bool improved = bkz_tour(eb.B, &eb.T, beta, cfg.delta_bkz, cfg.enum_node_cap);
        polish(eb.B, &eb.T);
        offer_all(tour);
        if (improved) {
            stall = 0;
            continue;
        }
        if (++stall >= cfg.stall_tours) {
            if (beta >= std::min(cfg.block_cap, eb.dim())) break;  // cap stall
            beta = std::min(beta + cfg.block_increment, std::min(cfg.block_cap, eb.dim()));
            stall = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Analytic helpers
// ---------------------------------------------------------------------------

/// Root-Hermite factor of BKZ with block size beta.
inline double root_hermite(int beta) {
    if (beta < 2) throw std::invalid_argument("root_hermite: need beta >= 2");
    double b = (double)beta;
    double base = b / (2.0 * M_PI * M_E) * std::pow(M_PI * b, 1.0 / b);
    return std::pow(base, 1.0 / (2.0 * (b - 1.0)));
}

/// Expected shortest length delta0^d vol^{1/d}.
inline double gaussian_heuristic(int d, double volume, double delta0) {
    if (d < 1 || volume <= 0.0) throw std::invalid_argument("gaussian_heuristic: bad input");
    return std::pow(delta0, d) * std::pow(volume, 1.0 / d);
}

/// Log-domain variant for volumes that overflow doubles.
inline double gaussian_heuristic_log(int d, double log_volume, double delta0) {
    return d * std::log(delta0) + log_volume / d;
}

struct SampleCountResult {
    i64 m;
    bool clamped;
};

/// Closed-form sample count minimizing the Gaussian-heuristic length of
/// the embedded lattice.
inline SampleCountResult optimal_sample_count(int n, int k, i64 q, i64 omega, int beta) {
    if (omega < 1 || q < 2) throw std::invalid_argument("optimal_sample_count: need q >= 2, omega >= 1");
    double gamma0 = root_hermite(beta);
    double nk = (double)n * k;
    double num = nk * (std::log((double)q) - std::log((double)omega));
    if (num <= 0.0) return {1, true};  // omega >= q degenerates the objective
    double m = std::sqrt(num / std::log(gamma0)) - nk;
    i64 mi = (i64)std::llround(m);
    bool clamped = mi < 1;
    if (clamped) mi = 1;
    return {mi, clamped};
}

struct CostReport {
    double delta0;
    double expected_shortest_log;  // log of the Gaussian-heuristic length, 0 if no volume given
    double rop_classical_log2;
    double rop_quantum_log2;
};

/// Sieving-style cost model T = 16 d t_beta with
/// log2 t_beta = 0.292 beta + 16.4 (classical), 0.265 beta + 16.4 (quantum).
inline CostReport bkz_cost(int beta, int d, double log_volume = 0.0) {
    if (beta < 2) throw std::invalid_argument("bkz_cost: need beta >= 2");
    CostReport r;
    r.delta0 = root_hermite(beta);
    r.expected_shortest_log =
        (log_volume != 0.0) ? gaussian_heuristic_log(d, log_volume, r.delta0) : 0.0;
    double log2_cd = std::log2(16.0 * (double)d);
    r.rop_classical_log2 = 0.292 * beta + 16.4 + log2_cd;
    r.rop_quantum_log2 = 0.265 * beta + 16.4 + log2_cd;
    return r;
}

/// log2 of the SVP oracle cost alone.
inline double svp_oracle_log2(int beta, bool quantum = false) {
    return (quantum ? 0.265 : 0.292) * beta + 16.4;
}

// ---------------------------------------------------------------------------
// Primal uSVP baseline (tiny scale)
// ---------------------------------------------------------------------------

/// Support/variance plausibility of a candidate secret against the public part.
inline bool plausible_secret(const LweInstance& inst, const Vec& s, double tau = 1.5) {
    const SecretSpec& ss = inst.secret_spec;
    i64 bound;
    switch (ss.family) {
        case SecretFamily::BinaryBernoulli:
        case SecretFamily::BinaryFixedHW: bound = 1; break;
        case SecretFamily::TernaryBalanced:
        case SecretFamily::TernaryFixedHW: bound = 1; break;
        default: bound = ss.eta; break;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < -bound || s[i] > bound) return false;
        if ((ss.family == SecretFamily::BinaryBernoulli || ss.family == SecretFamily::BinaryFixedHW) &&
            s[i] < 0)
            return false;
    }
    double acc = 0.0;
    for (int i = 0; i < inst.m(); ++i) {
        i64 r = center_mod(inst.b[i] - dot(inst.A[i], s), inst.q);
        acc += (double)r * r;
    }
    double sigma_r = std::sqrt(acc / inst.m());
    double sigma_e = std::sqrt(inst.error_spec.variance());
    return sigma_r <= tau * sigma_e + 1e-9;
}

/// Kannan-embedding attack: reduce, scan rows for (+-s | +-e | +-1),
/// verify. Tiny dimensions only.
inline std::optional<Vec> primal_usvp_attack(const LweInstance& inst, int beta = 0,
                                             int tours = 8) {
    int n = inst.n(), m = inst.m();
    int d = n + m + 1;
    Mat B(d, Vec(d, 0));
    for (int i = 0; i < n; ++i) {
        B[i][i] = 1;
        for (int j = 0; j < m; ++j) B[i][n + j] = inst.A[j][i];
    }
    for (int j = 0; j < m; ++j) B[n + j][n + j] = inst.q;
    for (int j = 0; j < m; ++j) B[d - 1][n + j] = -inst.b[j];
    B[d - 1][d - 1] = 1;

    if (beta <= 0) beta = std::min(d, 20);
    lll_reduce(B, nullptr, 0.99);
    for (int t = 0; t < tours; ++t)
        if (!bkz_tour(B, nullptr, beta, 0.99)) break;

    for (const Vec& row : B) {
        if (std::llabs(row[d - 1]) != 1) continue;
        i64 sign = row[d - 1];
        Vec s(n);
        for (int i = 0; i < n; ++i) s[i] = sign * row[i];
        if (plausible_secret(inst, s)) return s;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact integer helpers (test oracles and invariants)
// ---------------------------------------------------------------------------

/// Bareiss fraction-free determinant; exact for small dimensions.
inline i64 det_bareiss(Mat M) {
    int n = (int)M.size();
    if (n == 0) return 1;
    std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = M[i][j];
    i128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { p = i; break; }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return (i64)(sign * a[n - 1][n - 1]);
}

/// T * original == current, entrywise exact.
inline bool transform_consistent(const EmbeddedBasis& eb) {
    int d = eb.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            i128 acc = 0;
            for (int k = 0; k < d; ++k) acc += (i128)eb.T[i][k] * eb.original[k][j];
            if (acc != (i128)eb.B[i][j]) return false;
        }
    return true;
}

}  // namespace nomod

#endif
