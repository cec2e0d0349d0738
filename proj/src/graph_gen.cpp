#include "hcsl/graph_gen.hpp"

#include <numeric>
#include <stdexcept>

#include "hcsl/mathutil.hpp"

namespace hcsl {

Dag erdos_renyi(int d, double expected_in_degree, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("erdos_renyi: d must be >= 2");
    const double max_k = (d - 1) / 2.0;
    if (!(expected_in_degree > 0.0) || expected_in_degree > max_k)
        throw std::invalid_argument("erdos_renyi: expected in-degree infeasible");
    const double p = 2.0 * expected_in_degree / (d - 1);

    Rng rng(seed);
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    Dag g;
    g.d = d;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            if (rng.uniform() < p) g.edges.emplace(order[a], order[b]);
    return g;
}

Dag scale_free(int d, int m, std::uint64_t seed) {
    if (m < 1 || d < m) throw std::invalid_argument("scale_free: need d >= m >= 1");

    Rng rng(seed);
    Dag g;
    g.d = d;
    std::vector<std::uint64_t> degree(d, 0);
    for (int t = 1; t < d; ++t) {
        const int k = std::min(m, t);
        // degree+1 weights so the zero-degree seed node stays reachable
        std::vector<std::uint64_t> weight(t);
        std::uint64_t total = 0;
        for (int v = 0; v < t; ++v) total += weight[v] = degree[v] + 1;
        for (int e = 0; e < k; ++e) {
            std::uint64_t r = rng.below(total);
            int pick = 0;
            while (r >= weight[pick]) {
                r -= weight[pick];
                ++pick;
            }
            g.edges.emplace(pick, t);
            ++degree[pick];
            ++degree[t];
            total -= weight[pick];  // draw without replacement
            weight[pick] = 0;
        }
    }
    return g;
}

}  // namespace hcsl
