#include <catch2/catch_amalgamated.hpp>

#include "nomod/nomod_approx.hpp"

using namespace nomod;

namespace {

struct ExactMoments {
    double mu = 0.0;
    double var = 0.0;
};

double cbd_pmf(int eta, i64 k) {
    if (std::llabs(k) > eta) return 0.0;
    double logc = std::lgamma(2.0 * eta + 1.0) - std::lgamma(eta + k + 1.0) -
                  std::lgamma(eta - k + 1.0);
    return std::exp(logc - 2.0 * eta * std::log(2.0));
}

// Exact moments of <a, s> by full enumeration of the secret distribution.
// Each family enumerated from its definition, independent of the closed forms.
ExactMoments enumerate_moments(const Vec& a, const SecretSpec& spec) {
    int n = (int)a.size();
    double e1 = 0.0, e2 = 0.0, ptot = 0.0;
    auto account = [&](double p, double v) {
        ptot += p;
        e1 += p * v;
        e2 += p * v * v;
    };

    switch (spec.family) {
        case SecretFamily::BinaryBernoulli: {
            for (i64 mask = 0; mask < (1LL << n); ++mask) {
                double p = 1.0, v = 0.0;
                for (int i = 0; i < n; ++i) {
                    bool bit = (mask >> i) & 1;
                    p *= bit ? spec.p : 1.0 - spec.p;
                    if (bit) v += (double)a[i];
                }
                account(p, v);
            }
            break;
        }
        case SecretFamily::BinaryFixedHW: {
            i64 count = 0;
            for (i64 mask = 0; mask < (1LL << n); ++mask)
                if (__builtin_popcountll(mask) == spec.h) ++count;
            for (i64 mask = 0; mask < (1LL << n); ++mask) {
                if (__builtin_popcountll(mask) != spec.h) continue;
                double v = 0.0;
                for (int i = 0; i < n; ++i)
                    if ((mask >> i) & 1) v += (double)a[i];
                account(1.0 / count, v);
            }
            break;
        }
        case SecretFamily::TernaryBalanced: {
            i64 total = 1;
            for (int i = 0; i < n; ++i) total *= 3;
            for (i64 code = 0; code < total; ++code) {
                i64 c = code;
                double v = 0.0;
                for (int i = 0; i < n; ++i) {
                    v += (double)a[i] * ((c % 3) - 1);
                    c /= 3;
                }
                account(1.0 / total, v);
            }
            break;
        }
        case SecretFamily::TernaryFixedHW: {
            i64 supports = 0;
            for (i64 mask = 0; mask < (1LL << n); ++mask)
                if (__builtin_popcountll(mask) == spec.h) ++supports;
            double psign = 1.0 / (supports * std::pow(2.0, spec.h));
            for (i64 mask = 0; mask < (1LL << n); ++mask) {
                if (__builtin_popcountll(mask) != spec.h) continue;
                std::vector<int> pos;
                for (int i = 0; i < n; ++i)
                    if ((mask >> i) & 1) pos.push_back(i);
                for (i64 sgn = 0; sgn < (1LL << spec.h); ++sgn) {
                    double v = 0.0;
                    for (int t = 0; t < spec.h; ++t)
                        v += (double)a[pos[t]] * (((sgn >> t) & 1) ? 1 : -1);
                    account(psign, v);
                }
            }
            break;
        }
        case SecretFamily::Cbd: {
            int w = 2 * spec.eta + 1;
            i64 total = 1;
            for (int i = 0; i < n; ++i) total *= w;
            for (i64 code = 0; code < total; ++code) {
                i64 c = code;
                double p = 1.0, v = 0.0;
                for (int i = 0; i < n; ++i) {
                    i64 x = (c % w) - spec.eta;
                    c /= w;
                    p *= cbd_pmf(spec.eta, x);
                    v += (double)a[i] * x;
                }
                account(p, v);
            }
            break;
        }
        case SecretFamily::CbdFixedHW: {
            // truncation model: draw raw CBD, keep a uniform h-subset of the
            // nonzeros when there are more than h. Conditional first and
            // second moments of the kept vector are linear in the pair
            // retention probabilities, so subsets need not be enumerated.
            int w = 2 * spec.eta + 1;
            i64 total = 1;
            for (int i = 0; i < n; ++i) total *= w;
            for (i64 code = 0; code < total; ++code) {
                i64 c = code;
                double p = 1.0;
                Vec x(n);
                for (int i = 0; i < n; ++i) {
                    x[i] = (c % w) - spec.eta;
                    c /= w;
                    p *= cbd_pmf(spec.eta, x[i]);
                }
                int m = 0;
                for (i64 xi : x)
                    if (xi != 0) ++m;
                double keep1 = 1.0, keep2 = 1.0;
                if (m > spec.h) {
                    keep1 = (double)spec.h / m;
                    keep2 = (double)spec.h * (spec.h - 1) / ((double)m * (m - 1));
                }
                double lin = 0.0, sq = 0.0, cross = 0.0;
                for (int i = 0; i < n; ++i) {
                    double ci = (double)a[i] * x[i];
                    lin += ci;
                    sq += ci * ci;
                }
                cross = lin * lin - sq;
                ptot += p;
                e1 += p * keep1 * lin;
                e2 += p * (keep1 * sq + keep2 * cross);
            }
            double var = e2 - e1 * e1;
            REQUIRE(std::fabs(ptot - 1.0) < 1e-9);
            return {e1, var};
        }
    }
    REQUIRE(std::fabs(ptot - 1.0) < 1e-9);
    return {e1, e2 - e1 * e1};
}

}  // namespace

TEST_CASE("row_stats") {
    CHECK(row_stats({}).s1 == 0);
    CHECK(row_stats({}).s2 == 0);
    RowStats st = row_stats({3, -1, 0, 2});
    CHECK(st.s1 == 4);
    CHECK(st.s2 == 14);
}

TEST_CASE("cbd_zero_prob closed form") {
    CHECK(cbd_zero_prob(1) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(cbd_zero_prob(2) == Catch::Approx(6.0 / 16.0).epsilon(1e-12));
    CHECK(cbd_zero_prob(3) == Catch::Approx(20.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("as_moments worked examples") {
    // fixed weight 1 of 2 on row (1,1): the sum is always 1
    auto m = as_moments(row_stats({1, 1}), SecretSpec::binary_fixed_hw(2, 1), 2);
    CHECK(m.mu == Catch::Approx(1.0));
    CHECK(m.var == Catch::Approx(0.0).margin(1e-12));

    auto t = as_moments(row_stats({1, -1}), SecretSpec::ternary_balanced(2), 2);
    CHECK(t.mu == Catch::Approx(0.0));
    CHECK(t.var == Catch::Approx(4.0 / 3.0));
}

TEST_CASE("as_moments matches exhaustive enumeration") {
    Rng rng(101);
    std::vector<std::pair<SecretSpec, int>> cases = {
        {SecretSpec::binary_bernoulli(8, 0.3), 8},
        {SecretSpec::binary_bernoulli(8, 0.5), 8},
        {SecretSpec::binary_fixed_hw(8, 3), 8},
        {SecretSpec::ternary_balanced(8), 8},
        {SecretSpec::ternary_fixed_hw(8, 3), 8},
        {SecretSpec::cbd(8, 1), 8},
        {SecretSpec::cbd(6, 2), 6},
        {SecretSpec::cbd_fixed_hw(8, 1, 3), 8},
        {SecretSpec::cbd_fixed_hw(6, 2, 2), 6},
    };
    for (auto& [spec, n] : cases) {
        for (int trial = 0; trial < 4; ++trial) {
            Vec a(n);
            for (auto& x : a) x = rng.uniform_int(-7, 7);
            ExactMoments want = enumerate_moments(a, spec);
            MomentEstimate got = as_moments(row_stats(a), spec, n);
            double scale = std::max(1.0, std::fabs(want.var));
            CHECK(std::fabs(got.mu - want.mu) <= 1e-12 * std::max(1.0, std::fabs(want.mu)));
            CHECK(std::fabs(got.var - want.var) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("as_moments matches monte carlo at n = 16") {
    Rng rng(55);
    Vec a(16);
    for (auto& x : a) x = rng.uniform_int(-10, 10);
    std::vector<SecretSpec> specs = {
        SecretSpec::binary_bernoulli(16, 0.4),
        SecretSpec::binary_fixed_hw(16, 5),
        SecretSpec::ternary_balanced(16),
        SecretSpec::ternary_fixed_hw(16, 6),
        SecretSpec::cbd(16, 2),
    };
    const int N = 200000;
    for (const auto& spec : specs) {
        double acc1 = 0.0, acc2 = 0.0, acc4 = 0.0;
        for (int i = 0; i < N; ++i) {
            Vec s = sample_secret(spec, rng);
            double v = (double)dot(a, s);
            acc1 += v;
            acc2 += v * v;
            acc4 += v * v * v * v;
        }
        double mean = acc1 / N;
        double raw2 = acc2 / N;
        double var = raw2 - mean * mean;
        MomentEstimate got = as_moments(row_stats(a), spec, 16);
        // standard errors from the empirical higher moments
        double se_mean = std::sqrt(var / N);
        double se_var = std::sqrt(std::max(0.0, acc4 / N - raw2 * raw2) / N);
        CHECK(std::fabs(got.mu - mean) <= 3.0 * se_mean + 1e-9);
        CHECK(std::fabs(got.var - var) <= 3.0 * se_var + 1e-9);
    }
}

TEST_CASE("retention alpha") {
    CHECK(retention_alpha(8, 8, 2) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(retention_alpha(8, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(retention_alpha(8, 9, 2), std::invalid_argument);

    // model monte carlo: raw CBD draw, uniform h-subset kept among nonzeros
    int n = 4, h = 1, eta = 2;
    Rng rng(77);
    const int N = 400000;
    i64 nonzero = 0, survived = 0;
    for (int trial = 0; trial < N; ++trial) {
        Vec x(n);
        for (auto& v : x) v = sample_cbd(eta, rng);
        if (x[0] == 0) continue;
        ++nonzero;
        std::vector<int> nz;
        for (int i = 0; i < n; ++i)
            if (x[i] != 0) nz.push_back(i);
        if ((int)nz.size() <= h) {
            ++survived;
        } else {
            auto kept = rng.sample_without_replacement((int)nz.size(), h);
            for (int idx : kept)
                if (nz[idx] == 0) ++survived;
        }
    }
    double mc = (double)survived / nonzero;
    double alpha = retention_alpha(n, h, eta);
    double se = std::sqrt(alpha * (1.0 - alpha) / nonzero);
    CHECK(std::fabs(mc - alpha) <= 3.0 * se);
}

TEST_CASE("error and btilde moments") {
    CHECK(error_moments(ErrorSpec::gaussian(3.0)).var == Catch::Approx(9.0));
    CHECK(error_moments(ErrorSpec::cbd(2)).var == Catch::Approx(1.0));
    CHECK(error_moments(ErrorSpec::cbd(2)).mu == 0.0);

    SecretSpec ss = SecretSpec::ternary_balanced(4);
    ErrorSpec es = ErrorSpec::gaussian(2.0);
    auto small = btilde_moments({1, 0, 0, 0}, ss, es, 4);
    auto large = btilde_moments({5, 5, 5, 5}, ss, es, 4);
    CHECK(small.var == Catch::Approx(2.0 / 3.0 + 4.0));
    CHECK(large.var > small.var);  // monotone in row energy
}

TEST_CASE("candidate unwrapping") {
    MomentEstimate m{0.0, 100.0};  // sigma = 10
    auto set = candidates(250, m, 251, 3.0);
    REQUIRE(set.entries.size() == 1);
    CHECK(set.entries[0].value == -1);
    CHECK(set.entries[0].shift == -1);
    CHECK(set.entries[0].prob == Catch::Approx(1.0));
    CHECK_FALSE(set.window_was_empty);

    // window size bound and normalization over random draws
    Rng rng(9);
    for (int trial = 0; trial < 10000; ++trial) {
        i64 q = rng.uniform_int(10, 500);
        double sigma = 1.0 + (double)rng.uniform_int(0, 300);
        double mu = (double)rng.uniform_int(-200, 200);
        i64 b = rng.uniform_int(-q / 2, q / 2);
        auto s = candidates(b, {mu, sigma * sigma}, q, 4.0);
        CHECK((i64)s.entries.size() <= (i64)std::ceil(8.0 * sigma / q) + 1);
        double tot = 0.0;
        for (auto& c : s.entries) {
            tot += c.prob;
            CHECK((c.value - b) % q == 0);
        }
        CHECK(tot == Catch::Approx(1.0));
        // best() is the candidate nearest mu
        const auto& bst = s.best();
        for (auto& c : s.entries)
            CHECK(std::fabs((double)bst.value - mu) <= std::fabs((double)c.value - mu) + 1e-9);
    }

    // empty window falls back to the nearest pre-image
    auto fb = candidates(100, {0.0, 1.0}, 251, 4.0);
    CHECK(fb.window_was_empty);
    REQUIRE(fb.entries.size() == 1);
    CHECK(fb.entries[0].value == 100);

    CHECK_THROWS_AS(candidates(0, {0.0, 0.0}, 251), std::invalid_argument);
}

TEST_CASE("inlier probability") {
    CHECK(inlier_prob(251, 0.0) == 1.0);
    CHECK(inlier_prob(251, 1.0) == Catch::Approx(1.0).epsilon(1e-9));
    // strictly decreasing in sigma
    double prev = 2.0;
    for (double s : {10.0, 30.0, 60.0, 120.0, 500.0}) {
        double p = inlier_prob(251, s);
        CHECK(p < prev);
        CHECK(p > 0.0);
        prev = p;
    }
    // monte carlo: fraction of centered gaussians inside (-q/2, q/2]
    Rng rng(21);
    i64 q = 97;
    double sigma = 40.0;
    const int N = 200000;
    i64 in = 0;
    for (int i = 0; i < N; ++i) {
        double v = rng.gaussian(sigma);
        if (v > -q / 2.0 && v <= q / 2.0) ++in;
    }
    double p = inlier_prob(q, sigma);
    double se = std::sqrt(p * (1.0 - p) / N);
    CHECK(std::fabs((double)in / N - p) <= 3.0 * se);

    CHECK(expected_inliers({10.0, 30.0}, 251) ==
          Catch::Approx(inlier_prob(251, 10.0) + inlier_prob(251, 30.0)));
}
