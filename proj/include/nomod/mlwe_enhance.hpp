#ifndef NOMOD_MLWE_ENHANCE_HPP
#define NOMOD_MLWE_ENHANCE_HPP

#include <set>

#include "nomod/core.hpp"
#include "nomod/instances.hpp"
#include "nomod/ring.hpp"

namespace nomod {

// Sample amplification for MLWE: polynomial-row resampling with offsets,
// projection/pruning of the assembled matrix, and negative-circulant orbit
// expansion of reduced vectors.

struct CirculantBlock {
    Vec v;         // length-n coefficient vector
    int block_id;  // source polynomial sample
};

struct SubsampleSpec {
    int block_id;
    int offset;  // rho in [0, n)
};

/// Offset sequences per block: a deterministic pass with stride spacing
/// first, then fresh random offsets avoiding repeats until all n are used.
inline std::vector<std::vector<int>> offset_schedule(int n, int m, int n_blocks,
                                                     std::uint64_t seed) {
    if (n < 1 || n_blocks < 1) throw std::invalid_argument("offset_schedule: bad sizes");
    Rng rng(seed);
    int stride = ((m % n) + n) % n;
    if (stride == 0) stride = 1;
    std::vector<std::vector<int>> out(n_blocks);
    for (int b = 0; b < n_blocks; ++b) {
        std::vector<int> seq;
        std::vector<char> used(n, 0);
        // deterministic pass: offsets spaced by the stride
        for (int off = 0; !used[off]; off = (off + stride) % n) {
            seq.push_back(off);
            used[off] = 1;
        }
        // random fresh offsets until coverage is complete
        std::vector<int> rest;
        for (int off = 0; off < n; ++off)
            if (!used[off]) rest.push_back(off);
        rng.shuffle(rest);
        for (int off : rest) seq.push_back(off);
        out[b] = std::move(seq);
    }
    return out;
}

/// (n+1) x n subsample: rows j = 0..n-1 are the rotation rows for
/// x^{j - rho} v(x); the extra row continues the circulant sequence by one
/// step, i.e. the first row with all coefficients negated.
inline Mat build_subsample(const CirculantBlock& block, int rho) {
    int n = (int)block.v.size();
    if (rho < 0 || rho >= n) throw std::invalid_argument("build_subsample: need rho < n");
    Mat S(n + 1);
    for (int j = 0; j <= n; ++j) S[j] = rotation_row(block.v, j - rho);
    return S;
}

/// One assembled row: the rotation row across all ell sub-blocks of a
/// polynomial sample, paired with the matching rotation of its target.
struct AssembledRow {
    Vec row;       // width ell * n
    int block_id;  // source sample
    i64 rotation;  // u such that the row realizes x^u
};

struct AssembledMatrix {
    std::vector<AssembledRow> rows;
    bool first_block_constraint_met = true;
};

/// Concatenate subsamples until at least m rows, enforcing (a) no block
/// reuse within a matrix until all blocks appear and (b) distinct first
/// blocks across the first n_blocks matrices.
inline AssembledMatrix assemble_matrix(const std::vector<std::vector<Vec>>& block_polys,
                                       int n, int m, int matrix_index,
                                       const std::vector<std::vector<int>>& offsets) {
    int n_blocks = (int)block_polys.size();
    if (n_blocks < 1) throw std::invalid_argument("assemble_matrix: no blocks");
    AssembledMatrix out;
    std::vector<int> order;
    int first = matrix_index % n_blocks;  // constraint (b) for the first n_blocks matrices
    for (int t = 0; t < n_blocks; ++t) order.push_back((first + t) % n_blocks);
    out.first_block_constraint_met = (matrix_index < n_blocks) || n_blocks == 1;

    std::vector<std::size_t> next_offset(n_blocks, (std::size_t)matrix_index);
    // rotations u and u+n differ only by sign; track them sign-canonically
    // so the matrix never carries linearly dependent duplicate rows
    std::vector<std::set<int>> used(n_blocks);
    int pass = 0, idle = 0;
    while ((int)out.rows.size() < m) {
        if (idle >= n_blocks)
            throw std::runtime_error("assemble_matrix: distinct rotations exhausted");
        int b = order[pass % n_blocks];
        ++pass;
        const std::vector<int>& seq = offsets[b];
        int rho = seq[next_offset[b] % seq.size()];
        ++next_offset[b];
        int ell = (int)block_polys[b].size();
        bool added = false;
        for (int j = 0; j <= n && (int)out.rows.size() < m; ++j) {
            i64 u = (i64)j - rho;
            int canon = (int)(((u % n) + n) % n);
            if (!used[b].insert(canon).second) continue;
            AssembledRow ar;
            ar.block_id = b;
            ar.rotation = u;
            ar.row.reserve((std::size_t)ell * n);
            for (int l = 0; l < ell; ++l) {
                Vec part = rotation_row(block_polys[b][l], ar.rotation);
                ar.row.insert(ar.row.end(), part.begin(), part.end());
            }
            out.rows.push_back(std::move(ar));
            added = true;
        }
        idle = added ? 0 : idle + 1;
    }
    return out;
}

struct PruneBookkeeping {
    std::vector<int> removed_rows;  // indices into the raw (h+1)n row space
    int original_rows = 0;
    int kept_rows = 0;
};

/// Zero the last n-g coordinates of the final length-n block of the raw
/// sample space and drop the resulting all-zero rows, leaving exactly
/// m = h n + g active rows.
template <class Row>
inline std::pair<std::vector<Row>, PruneBookkeeping> project_and_prune(
    const std::vector<Row>& raw_rows, int g, int n) {
    int total = (int)raw_rows.size();
    if (total % n != 0) throw std::invalid_argument("project_and_prune: rows must fill blocks of n");
    if (g < 0 || g >= n) throw std::invalid_argument("project_and_prune: need 0 <= g < n");
    int keep = total - (n - g);
    if (keep < 1) throw std::invalid_argument("project_and_prune: nothing left after pruning");
    PruneBookkeeping bk;
    bk.original_rows = total;
    bk.kept_rows = keep;
    for (int i = keep; i < total; ++i) bk.removed_rows.push_back(i);
    std::vector<Row> kept(raw_rows.begin(), raw_rows.begin() + keep);
    return {std::move(kept), bk};
}

/// Reinsert zeros at the pruned coordinates of a sample-space vector.
inline Vec reinsert(const Vec& v, const PruneBookkeeping& bk) {
    if ((int)v.size() != bk.kept_rows)
        throw std::invalid_argument("reinsert: length mismatch");
    Vec out(v);
    out.resize(bk.original_rows, 0);
    return out;
}

/// Negative-circulant orbit of a reduced vector: rotate every length-n
/// sub-block in synchrony by x^t for t = 0..n-1, dropping duplicates.
/// Every output has the same Euclidean norm as the input.
inline std::vector<Vec> orbit_expand(const Vec& row, int n) {
    if (row.size() % n != 0) throw std::invalid_argument("orbit_expand: length not divisible by n");
    int blocks = (int)row.size() / n;
    std::set<Vec> seen;
    std::vector<Vec> out;
    for (int t = 0; t < n; ++t) {
        Vec v;
        v.reserve(row.size());
        for (int b = 0; b < blocks; ++b) {
            Vec sub(row.begin() + (std::size_t)b * n, row.begin() + (std::size_t)(b + 1) * n);
            Vec rot = rotate_negacyclic(sub, t);
            v.insert(v.end(), rot.begin(), rot.end());
        }
        if (seen.insert(v).second) out.push_back(std::move(v));
    }
    return out;
}

/// Apply x^t to the underlying polynomials of every length-n block of A
/// and b. b blocks hold plain coefficients and rotate forward; A row
/// blocks are row functionals (dual coefficient layout), where the same
/// polynomial map is a backward rotation.
inline std::pair<Mat, Vec> apply_automorphism(const Mat& A, const Vec& b, int t, int n) {
    if (t < 0 || t >= n) throw std::invalid_argument("apply_automorphism: need t < n");
    Mat At;
    At.reserve(A.size());
    for (const Vec& row : A) {
        Vec v;
        v.reserve(row.size());
        int blocks = (int)row.size() / n;
        for (int bl = 0; bl < blocks; ++bl) {
            Vec sub(row.begin() + (std::size_t)bl * n, row.begin() + (std::size_t)(bl + 1) * n);
            Vec rot = rotate_negacyclic(sub, -t);
            v.insert(v.end(), rot.begin(), rot.end());
        }
        At.push_back(std::move(v));
    }
    Vec bt;
    bt.reserve(b.size());
    int bblocks = (int)b.size() / n;
    for (int bl = 0; bl < bblocks; ++bl) {
        Vec sub(b.begin() + (std::size_t)bl * n, b.begin() + (std::size_t)(bl + 1) * n);
        Vec rot = rotate_negacyclic(sub, t);
        bt.insert(bt.end(), rot.begin(), rot.end());
    }
    return {std::move(At), std::move(bt)};
}

}  // namespace nomod

#endif
