#pragma once

#include <cstdint>

#include "hcsl/dag.hpp"

namespace hcsl {

// Erdős–Rényi DAG: a hidden uniform random vertex order is drawn, then each
// (earlier, later) pair becomes an edge independently with probability
// p = expected_in_degree * d / C(d,2), so the expected edge count is
// expected_in_degree * d. Requires d >= 2 and
// 0 < expected_in_degree <= (d-1)/2 (so p <= 1).
Dag erdos_renyi(int d, double expected_in_degree, std::uint64_t seed);

// Scale-free DAG grown by preferential attachment: nodes are added in index
// order, node t >= 1 attaches min(m, t) edges to distinct previous nodes
// drawn with probability proportional to degree+1, oriented old -> new.
// The edge count is therefore sum over t of min(m, t): d=5, m=1 gives 4
// edges (a directed tree), d=10, m=2 gives 17. Requires d >= m >= 1.
Dag scale_free(int d, int m, std::uint64_t seed);

}  // namespace hcsl
