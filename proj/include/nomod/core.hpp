#ifndef NOMOD_CORE_HPP
#define NOMOD_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomod {

using i64 = long long;
using i128 = __int128;
using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

/// Integer modulus. All residues are kept in centered form (-q/2, q/2].
struct Modulus {
    i64 q;
    explicit Modulus(i64 q_) : q(q_) {
        if (q < 2) throw std::invalid_argument("modulus must be >= 2");
    }
};

/// Centered representative of x mod q, in (-q/2, q/2].
inline i64 center_mod(i64 x, i64 q) {
    i64 r = x % q;
    if (r < 0) r += q;          // now in [0, q)
    if (2 * r > q) r -= q;      // (-q/2, q/2]
    return r;
}

inline i64 dot(const Vec& a, const Vec& b) {
    i128 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (i128)a[i] * b[i];
    return (i64)acc;
}

inline i64 norm2(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt((double)norm2(a)); }

/// Deterministic RNG used throughout; one seed pins an entire experiment.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform integer in [lo, hi] inclusive.
    i64 uniform_int(i64 lo, i64 hi) {
        std::uniform_int_distribution<i64> d(lo, hi);
        return d(gen_);
    }

    /// Uniform residue in [0, q).
    i64 uniform_mod(i64 q) { return uniform_int(0, q - 1); }

    double uniform_real() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(gen_);
    }

    double gaussian(double sigma) {
        std::normal_distribution<double> d(0.0, sigma);
        return d(gen_);
    }

    bool bernoulli(double p) { return uniform_real() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), gen_);
    }

    /// k distinct indices from [0, n), in random order.
    std::vector<int> sample_without_replacement(int n, int k) {
        if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < k; ++i) {
            int j = (int)uniform_int(i, n - 1);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

/// Derive a stream seed from a base seed and a stream id, so parallel
/// workers stay deterministic regardless of scheduling.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t id) {
    // splitmix64 step on the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace nomod

#endif
