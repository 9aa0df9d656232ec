#ifndef NOMOD_RING_HPP
#define NOMOD_RING_HPP

#include "nomod/core.hpp"

namespace nomod {

// Arithmetic in Z[x]/(x^n + 1), coefficient vectors of length n.
// The wrap relation x^n = -1 negates coefficients that fold around.

/// Coefficients of x^t * v(x) mod (x^n + 1). Negative t allowed.
inline Vec rotate_negacyclic(const Vec& v, i64 t) {
    int n = (int)v.size();
    i64 period = 2 * (i64)n;
    i64 u = ((t % period) + period) % period;  // u in [0, 2n)
    i64 sign = 1;
    if (u >= n) { u -= n; sign = -1; }
    Vec out(n);
    for (int j = 0; j < n; ++j) {
        // coefficient j of x^u * v: from v[j-u], negated if j-u wrapped
        i64 src = j - u;
        i64 s = sign;
        if (src < 0) { src += n; s = -s; }
        out[j] = s * v[src];
    }
    return out;
}

/// Schoolbook product a(x)*s(x) mod (x^n + 1), no modular reduction.
inline Vec poly_mult_negacyclic(const Vec& a, const Vec& s) {
    int n = (int)a.size();
    Vec out(n, 0);
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            int k = i + j;
            i64 term = a[i] * s[j];
            if (k < n) out[k] += term;
            else out[k - n] -= term;
        }
    }
    return out;
}

/// n x n matrix of multiplication by a(x): column j holds the
/// coefficients of x^j * a(x), so M * coeffs(s) = coeffs(a*s).
inline Mat negacyclic_matrix(const Vec& a) {
    int n = (int)a.size();
    Mat M(n, Vec(n));
    for (int j = 0; j < n; ++j) {
        Vec col = rotate_negacyclic(a, j);
        for (int i = 0; i < n; ++i) M[i][j] = col[i];
    }
    return M;
}

/// Row functional for rotation u of block polynomial v: a row vector w with
/// w . coeffs(s) = coeff_0(x^u * v(x) * s(x)). This is row 0 of the
/// negacyclic matrix of x^u * v.
inline Vec rotation_row(const Vec& v, i64 u) {
    int n = (int)v.size();
    Vec w = rotate_negacyclic(v, u);
    Vec row(n);
    row[0] = w[0];
    for (int t = 1; t < n; ++t) row[t] = -w[n - t];
    return row;
}

/// coeff_0(x^u * v(x)), the target paired with rotation_row(v, u).
inline i64 rotation_target(const Vec& v, i64 u) {
    return rotate_negacyclic(v, u)[0];
}

}  // namespace nomod

#endif
