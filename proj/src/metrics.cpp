#include "hcsl/metrics.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

#include "hcsl/mathutil.hpp"

namespace hcsl {

int order_divergence(const Dag& g, const std::vector<int>& pi) {
    if (pi.size() != static_cast<std::size_t>(g.d))
        throw std::invalid_argument("order_divergence: ordering size mismatch");
    std::vector<int> pos(g.d, -1);
    for (std::size_t k = 0; k < pi.size(); ++k) {
        const int v = pi[k];
        if (v < 0 || v >= g.d || pos[v] >= 0)
            throw std::invalid_argument(
                "order_divergence: not a permutation of the vertices");
        pos[v] = static_cast<int>(k);
    }
    int count = 0;
    for (const auto& [tail, head] : g.edges)
        if (pos[tail] > pos[head]) ++count;
    return count;
}

int shd(const Dag& a, const Dag& b) {
    if (a.d != b.d) throw std::invalid_argument("shd: vertex count mismatch");
    // status of pair {u, v}, u < v: 0 none, 1 u->v, 2 v->u
    auto status = [](const Dag& g, int u, int v) {
        if (g.edges.count({u, v})) return 1;
        if (g.edges.count({v, u})) return 2;
        return 0;
    };
    int dist = 0;
    for (int u = 0; u < a.d; ++u)
        for (int v = u + 1; v < a.d; ++v)
            if (status(a, u, v) != status(b, u, v)) ++dist;
    return dist;
}

double f1(const Dag& pred, const Dag& truth) {
    if (pred.d != truth.d) throw std::invalid_argument("f1: vertex count mismatch");
    if (pred.edges.empty() && truth.edges.empty()) return 1.0;
    std::size_t tp = 0;
    for (const auto& e : pred.edges) tp += truth.edges.count(e);
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / pred.edges.size();
    const double recall = static_cast<double>(tp) / truth.edges.size();
    return 2.0 * precision * recall / (precision + recall);
}

std::optional<double> auc(const Dag& truth, const std::vector<double>& pvalues) {
    const std::size_t d = static_cast<std::size_t>(truth.d);
    if (pvalues.size() != d * d)
        throw std::invalid_argument("auc: p-value matrix size mismatch");
    std::vector<double> scores;
    std::vector<bool> labels;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            if (a == b) continue;
            const double p = pvalues[a * d + b];
            scores.push_back(p > 0.0 ? 1.0 - p : 0.0);
            labels.push_back(truth.edges.count({static_cast<int>(a),
                                                static_cast<int>(b)}) > 0);
        }
    }
    std::size_t npos = 0;
    for (bool l : labels) npos += l;
    const std::size_t nneg = labels.size() - npos;
    if (npos == 0 || nneg == 0) return std::nullopt;
    const std::vector<double> r = midranks(scores);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i]) rank_sum += r[i];
    const double u_stat =
        rank_sum - static_cast<double>(npos) * (npos + 1) / 2.0;
    return u_stat / (static_cast<double>(npos) * static_cast<double>(nneg));
}

}  // namespace hcsl
