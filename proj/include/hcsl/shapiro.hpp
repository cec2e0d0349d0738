#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hcsl {

struct WStatistic {
    double w = 0.0;    // clamped to [0, 1]
    std::size_t n = 0;  // sample size actually used
};

// Shapiro-Wilk W via the Royston large-n coefficient approximation:
// m_k = Phi^-1((k - 3/8) / (n + 1/4)), endpoint-corrected a_n (and a_{n-1}
// for n > 5) from the published quintic polynomials in 1/sqrt(n), interior
// coefficients m_k normalized by the remaining mass, the whole vector then
// normalized to unit length. Coefficients are built antisymmetric by
// construction (lower half mirrored with negated sign), and the numerator
// is accumulated over (upper - lower) order-statistic pairs, which makes W
// insensitive to translations at the level of double rounding. n = 3 uses
// the exact coefficients (-sqrt(1/2), 0, sqrt(1/2)).
//
// Samples larger than 5000 are reduced to a uniform subsample of 5000
// points drawn from a fixed-seed stream (deterministic for a given input
// size). No p-value is computed anywhere.
//
// Throws std::invalid_argument for n < 3 or a constant sample.
WStatistic shapiro_wilk_w(std::span<const double> sample);

// Coefficient vector a for a given n (ascending order statistics); exposed
// for the antisymmetry and normalization property tests.
std::vector<double> shapiro_wilk_coefficients(std::size_t n);

}  // namespace hcsl
