#pragma once

#include <cstdint>
#include <vector>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"
#include "hcsl/natgauss.hpp"

namespace hcsl {

struct OrderConfig {
    double epsilon = 1e-4;  // layer width on the W scale
    FitConfig fit;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct OrderDiag {
    std::size_t fits = 0;  // conditional models trained
};

// Recovers a causal ordering by repeatedly selecting the sources whose
// residuals look most Gaussian. Each step fits every unplaced node on the
// placed set, scores the standardized residuals with the Shapiro-Wilk W,
// and emits one layer: every candidate within epsilon of the best W, sorted
// by decreasing W (ties by increasing node index). Columns are standardized
// internally; per-fit seeds derive from (seed, step, node), so results do
// not depend on jobs. w_trace records each step's (node, W) pairs sorted by
// node index.
Ordering host_order(const Dataset& data, const OrderConfig& cfg,
                    OrderDiag* diag = nullptr);

// Layer decomposition of a DAG: layer k holds the nodes whose parents all
// sit in earlier layers, sorted by index. The concatenation is a valid
// topological ordering with order divergence zero.
Ordering oracle_order(const Dag& g);

// Nodes by increasing marginal variance, singleton layers, ties by index.
Ordering varsort_order(const Dataset& data);

// Greedy minimal-conditional-variance ordering: each step appends the
// unplaced node with the smallest residual variance after OLS regression
// (with intercept, ridge 1e-8) on the placed nodes; ties keep the lowest
// index. Singleton layers. Requires n > d.
Ordering eqvar_order(const Dataset& data);

}  // namespace hcsl
