#include "hcsl/shapiro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hcsl/mathutil.hpp"

namespace hcsl {

namespace {

constexpr std::size_t kMaxExact = 5000;
constexpr std::uint64_t kSubsampleSeed = 0x5357u;  // fixed, documented

// Royston endpoint-correction quintics in u = 1/sqrt(n), constant term 0.
double poly_c1(double u) {
    return ((((-2.706056 * u + 4.434685) * u - 2.071190) * u - 0.147981) * u +
            0.221157) * u;
}

double poly_c2(double u) {
    return ((((-3.582633 * u + 5.682633) * u - 1.752461) * u - 0.293762) * u +
            0.042981) * u;
}

}  // namespace

std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
    if (n < 3) throw std::invalid_argument("shapiro_wilk: n must be >= 3");

    std::vector<double> a(n);
    if (n == 3) {
        a[0] = -std::sqrt(0.5);
        a[1] = 0.0;
        a[2] = std::sqrt(0.5);
        return a;
    }

    // expected normal order statistics, antisymmetric by construction
    std::vector<double> m(n, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double q = (static_cast<double>(k) - 0.375) /
                         (static_cast<double>(n) + 0.25);
        m[k - 1] = norm_quantile(q);
        m[n - k] = -m[k - 1];
    }
    double ssm = 0.0;
    for (double v : m) ssm += v * v;
    const double rssm = std::sqrt(ssm);
    const double u = 1.0 / std::sqrt(static_cast<double>(n));

    const double an = poly_c1(u) + m[n - 1] / rssm;
    double phi;
    std::size_t lo;  // first interior index (0-based)
    if (n <= 5) {
        phi = (ssm - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * an * an);
        lo = 1;
        a[n - 1] = an;
        a[0] = -an;
    } else {
        const double an1 = poly_c2(u) + m[n - 2] / rssm;
        phi = (ssm - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
              (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
        lo = 2;
        a[n - 1] = an;
        a[n - 2] = an1;
        a[0] = -an;
        a[1] = -an1;
    }
    const double rphi = std::sqrt(phi);
    for (std::size_t k = lo; k < n - lo; ++k) a[k] = m[k] / rphi;

    double norm2 = 0.0;
    for (double v : a) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    // normalize the upper half and mirror so antisymmetry stays exact
    for (std::size_t k = 0; k < n / 2; ++k) {
        a[n - 1 - k] /= norm;
        a[k] = -a[n - 1 - k];
    }
    if (n % 2 == 1) a[n / 2] = 0.0;
    return a;
}

WStatistic shapiro_wilk_w(std::span<const double> sample) {
    std::size_t n = sample.size();
    if (n < 3) throw std::invalid_argument("shapiro_wilk: n must be >= 3");

    std::vector<double> x;
    if (n > kMaxExact) {
        Rng rng(derive_seed(kSubsampleSeed, {n}));
        x.reserve(kMaxExact);
        for (std::size_t idx : rng.sample_indices(n, kMaxExact))
            x.push_back(sample[idx]);
        n = kMaxExact;
    } else {
        x.assign(sample.begin(), sample.end());
    }
    std::sort(x.begin(), x.end());
    if (x.front() == x.back())
        throw std::invalid_argument("shapiro_wilk: constant sample");

    const std::vector<double> a = shapiro_wilk_coefficients(n);

    // numerator over (upper - lower) pairs: translation cancels pairwise
    double num = 0.0;
    for (std::size_t k = 0; k < n / 2; ++k)
        num += a[n - 1 - k] * (x[n - 1 - k] - x[k]);

    double xm = 0.0;
    for (double v : x) xm += v;
    xm /= static_cast<double>(n);
    double den = 0.0;
    for (double v : x) den += (v - xm) * (v - xm);

    WStatistic ws;
    ws.n = n;
    ws.w = std::clamp(num * num / den, 0.0, 1.0);
    return ws;
}

}  // namespace hcsl
