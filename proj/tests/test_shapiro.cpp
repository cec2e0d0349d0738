#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hcsl/mathutil.hpp"
#include "hcsl/shapiro.hpp"

#include "data/shapiro_ref.inc"

using namespace hcsl;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, int dist) {
    std::vector<double> x(n);
    for (double& v : x) {
        switch (dist) {
            case 0: v = rng.normal(); break;
            case 1: v = rng.uniform(-1.0, 1.0); break;
            case 2: v = std::tan(std::numbers::pi * (rng.uniform() - 0.5)); break;
            default: v = std::exp(rng.normal()); break;
        }
    }
    return x;
}

}  // namespace

TEST_CASE("W matches the frozen independent references") {
    const std::size_t cases = sizeof(kShapiroRefCases) / sizeof(kShapiroRefCases[0]);
    REQUIRE(cases == 50);
    double worst = 0.0;
    for (std::size_t c = 0; c < cases; ++c) {
        const ShapiroRefCase& rc = kShapiroRefCases[c];
        const std::vector<double> x(rc.values, rc.values + rc.n);
        const double w = shapiro_wilk_w(x).w;
        worst = std::max(worst, std::abs(w - rc.w_ref));
        CHECK(std::abs(w - rc.w_ref) <= 1e-6);
    }
    MESSAGE("max |W - ref| over 50 cases: ", worst);
}

TEST_CASE("n = 3 with sample {-1, 0, 1} gives W = 1") {
    const std::vector<double> x = {-1.0, 0.0, 1.0};
    const WStatistic w = shapiro_wilk_w(x);
    CHECK(w.n == 3);
    CHECK(w.w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.w <= 1.0);  // the clamp guarantees the bound exactly
}

TEST_CASE("coefficients are exactly antisymmetric and unit norm") {
    for (std::size_t n : {3u, 4u, 5u, 6u, 7u, 11u, 50u, 501u, 5000u}) {
        const std::vector<double> a = shapiro_wilk_coefficients(n);
        REQUIRE(a.size() == n);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(a[k] + a[n - 1 - k] == 0.0);
        double norm = 0.0;
        for (double v : a) norm += v * v;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        // ascending coefficients: negative low tail, positive high tail
        CHECK(a.front() < 0.0);
        CHECK(a.back() > 0.0);
    }
}

TEST_CASE("W agrees with the direct squared-correlation formula") {
    Rng rng(101);
    for (std::size_t n : {5u, 20u, 100u, 999u}) {
        std::vector<double> x = draw(rng, n, 0);
        const double w = shapiro_wilk_w(x).w;
        std::sort(x.begin(), x.end());
        const std::vector<double> a = shapiro_wilk_coefficients(n);
        double num = 0.0, m = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            num += a[k] * x[k];
            m += x[k];
        }
        m /= static_cast<double>(n);
        double den = 0.0;
        for (double v : x) den += (v - m) * (v - m);
        CHECK(w == doctest::Approx(num * num / den).epsilon(1e-10));
    }
}

TEST_CASE("W is permutation invariant bit for bit") {
    Rng rng(102);
    std::vector<double> x = draw(rng, 400, 3);
    const double w = shapiro_wilk_w(x).w;
    for (int rep = 0; rep < 5; ++rep) {
        rng.shuffle(x);
        CHECK(shapiro_wilk_w(x).w == w);
    }
}

TEST_CASE("W is invariant under affine maps with either sign") {
    Rng rng(103);
    for (std::size_t n : {10u, 137u, 2000u}) {
        const std::vector<double> x = draw(rng, n, 0);
        const double w = shapiro_wilk_w(x).w;
        for (double c : {3.7, -2.9, 1e-3, -1e3}) {
            for (double b : {0.0, 11.5, -400.0}) {
                std::vector<double> y(n);
                for (std::size_t k = 0; k < n; ++k) y[k] = c * x[k] + b;
                CHECK(shapiro_wilk_w(y).w == doctest::Approx(w).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("W stays inside [0, 1] across distributions and sizes") {
    Rng rng(104);
    const std::size_t sizes[] = {3, 4, 5, 8, 17, 100, 1001, 5000};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = sizes[trial % 8];
        const std::vector<double> x = draw(rng, n, trial % 4);
        const double w = shapiro_wilk_w(x).w;
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("normal samples score higher W than uniform samples") {
    Rng rng(105);
    std::vector<double> wn, wu;
    for (int rep = 0; rep < 200; ++rep) {
        wn.push_back(shapiro_wilk_w(draw(rng, 500, 0)).w);
        wu.push_back(shapiro_wilk_w(draw(rng, 500, 1)).w);
    }
    std::sort(wn.begin(), wn.end());
    std::sort(wu.begin(), wu.end());
    CHECK(wn[100] > wu[100]);  // medians
}

TEST_CASE("oversized samples are reduced to a deterministic subsample") {
    Rng rng(106);
    const std::vector<double> x = draw(rng, 7000, 0);
    const WStatistic a = shapiro_wilk_w(x);
    const WStatistic b = shapiro_wilk_w(x);
    CHECK(a.n == 5000);
    CHECK(a.w == b.w);
    CHECK(a.w > 0.9);  // still recognizes normal data
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(shapiro_wilk_w(std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(shapiro_wilk_w(std::vector<double>(10, 3.3)),
                    std::invalid_argument);
}
