#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace hcsl {

// Inverse standard normal CDF (Wichura's AS 241 PPND16 rational
// approximation, accurate to ~1e-15 relative). Throws std::domain_error
// outside (0, 1). Implemented once and used both for expected normal order
// statistics and for inverse-CDF normal sampling, so every draw is
// bit-stable across standard libraries.
double norm_quantile(double p);

double mean(std::span<const double> x);

// Biased (1/n) variance, the Gaussian MLE used throughout.
double variance(std::span<const double> x);

// Midranks in [1, n]: ties receive the average of the ranks they span.
std::vector<double> midranks(std::span<const double> x);

// Solves (A + ridge*I) x = b for symmetric positive definite A (row-major
// k x k) in place via Cholesky. Throws std::runtime_error if the damped
// matrix is not positive definite.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b,
                                   std::size_t k, double ridge);

// Deterministic substream derivation: folds each tag into the state with a
// splitmix64 step. Used to give every fit / CI test / dataset its own seed
// so results cannot depend on execution order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

// Seeded random stream. Normal deviates go through norm_quantile rather
// than std::normal_distribution (whose algorithm is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on the open interval (0, 1)
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return norm_quantile(uniform()); }

    // uniform integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    // Fisher-Yates shuffle
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    // k distinct indices from [0, n), in selection order
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  private:
    std::mt19937_64 gen_;
};

}  // namespace hcsl
