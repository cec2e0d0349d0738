#pragma once

#include <optional>
#include <vector>

#include "hcsl/dag.hpp"

namespace hcsl {

struct Scores {
    std::optional<int> order_divergence;  // absent when no ordering was given
    int shd = 0;
    double f1 = 0.0;
    std::optional<double> auc;  // absent when truth has no edges or is complete
};

// Number of edges whose head precedes its tail in pi; zero iff pi is a
// valid topological ordering of g. Throws std::invalid_argument on a
// malformed permutation.
int order_divergence(const Dag& g, const std::vector<int>& pi);

// Structural Hamming distance over unordered vertex pairs: each pair whose
// status (absent / one direction / other direction) differs between the two
// graphs contributes exactly 1, so a reversed edge costs 1, not 2.
int shd(const Dag& a, const Dag& b);

// Directed-edge F1 of pred against truth. Both graphs empty scores 1; an
// empty prediction against a non-empty truth (or vice versa) scores 0.
double f1(const Dag& pred, const Dag& truth);

// Area under the ROC curve for edge detection: every ordered pair (a, b),
// a != b, is an instance labeled by truth, scored 1 - p where p is the
// recorded p-value for (a, b) and 0 where no test ran. Ties are handled by
// midranks. Returns nullopt when the labels are degenerate (no positive or
// no negative pairs). pvalues is the d x d row-major matrix produced by
// recover_dag.
std::optional<double> auc(const Dag& truth, const std::vector<double>& pvalues);

}  // namespace hcsl
