#include "hcsl/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hcsl/kern/kernels.hpp"

namespace hcsl {

namespace {

// AS 241 PPND16 coefficient sets (Wichura 1988), highest degree last.
constexpr double kA[] = {3.3871328727963666080e0, 1.3314166789178437745e2,
                         1.9715909503065514427e3, 1.3731693765509461125e4,
                         4.5921953931549871457e4, 6.7265770927008700853e4,
                         3.3430575583588128105e4, 2.5090809287301226727e3};
constexpr double kB[] = {1.0,                     4.2313330701600911252e1,
                         6.8718700749205790830e2, 5.3941960214247511077e3,
                         2.1213794301586595867e4, 3.9307895800092710610e4,
                         2.8729085735721942674e4, 5.2264952788528545610e3};
constexpr double kC[] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                         5.76949722146069140550e0,  3.64784832476320460504e0,
                         1.27045825245236838258e0,  2.41780725177450611770e-1,
                         2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[] = {1.0,                       2.05319162663775882187e0,
                         1.67638483018380384940e0,  6.89767334985100004550e-1,
                         1.48103976427480074590e-1, 1.51986665636164571966e-2,
                         5.47593808499534494600e-4, 1.05075007164441684324e-9};
constexpr double kE[] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                         1.78482653991729133580e0,  2.96560571828504891230e-1,
                         2.65321895265761230930e-2, 1.24266094738807843860e-3,
                         2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[] = {1.0,                       5.99832206555887937690e-1,
                         1.36929880922735805310e-1, 1.48753612908506148525e-2,
                         7.86869131145613259100e-4, 1.84631831751005468180e-5,
                         1.42151175831644588870e-7, 2.04426310338993978564e-15};

double ratpoly(const double* num, const double* den, double r) {
    double p = num[7], q = den[7];
    for (int i = 6; i >= 0; --i) {
        p = p * r + num[i];
        q = q * r + den[i];
    }
    return p / q;
}

}  // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must lie in (0, 1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * ratpoly(kA, kB, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x = r <= 5.0 ? ratpoly(kC, kD, r - 1.6) : ratpoly(kE, kF, r - 5.0);
    return q < 0.0 ? -x : x;
}

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean: empty input");
    return kern::ksum(x.data(), x.size()) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

std::vector<double> midranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b,
                                   std::size_t k, double ridge) {
    if (a.size() != k * k || b.size() != k)
        throw std::invalid_argument("cholesky_solve: shape mismatch");
    for (std::size_t i = 0; i < k; ++i) a[i * k + i] += ridge;
    // in-place lower Cholesky
    for (std::size_t j = 0; j < k; ++j) {
        double d = a[j * k + j];
        for (std::size_t t = 0; t < j; ++t) d -= a[j * k + t] * a[j * k + t];
        if (d <= 0.0)
            throw std::runtime_error("cholesky_solve: matrix not positive definite");
        const double l = std::sqrt(d);
        a[j * k + j] = l;
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = a[i * k + j];
            for (std::size_t t = 0; t < j; ++t) s -= a[i * k + t] * a[j * k + t];
            a[i * k + j] = s / l;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t t = 0; t < i; ++t) s -= a[i * k + t] * b[t];
        b[i] = s / a[i * k + i];
    }
    for (std::size_t ii = k; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double s = b[i];
        for (std::size_t t = i + 1; t < k; ++t) s -= a[t * k + i] * b[t];
        b[i] = s / a[i * k + i];
    }
    return b;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t x = base;
    auto mix = [&x]() {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        x = z ^ (z >> 31);
    };
    mix();
    for (std::uint64_t t : tags) {
        x ^= t;
        mix();
    }
    return x;
}

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_indices: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // partial Fisher-Yates: first k positions end up with the sample
    for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + below(n - i)]);
    pool.resize(k);
    return pool;
}

}  // namespace hcsl
