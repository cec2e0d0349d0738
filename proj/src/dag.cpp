#include "hcsl/dag.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace hcsl {

namespace {

std::vector<std::vector<int>> children_lists(const Dag& g) {
    std::vector<std::vector<int>> ch(g.d);
    for (const auto& [j, i] : g.edges) ch[j].push_back(i);
    return ch;
}

std::vector<std::vector<int>> parent_lists(const Dag& g) {
    std::vector<std::vector<int>> pa(g.d);
    for (const auto& [j, i] : g.edges) pa[i].push_back(j);
    return pa;
}

}  // namespace

void validate(const Dag& g) {
    if (g.d <= 0) throw std::invalid_argument("dag: vertex count must be positive");
    for (const auto& [j, i] : g.edges) {
        if (j < 0 || j >= g.d || i < 0 || i >= g.d)
            throw std::invalid_argument("dag: edge endpoint out of range");
        if (j == i) throw std::invalid_argument("dag: self-loop");
    }
    topo_order(g);
}

std::vector<int> topo_order(const Dag& g) {
    std::vector<int> indeg(g.d, 0);
    for (const auto& [j, i] : g.edges) {
        (void)j;
        ++indeg[i];
    }
    auto ch = children_lists(g);
    std::vector<int> order;
    order.reserve(g.d);
    // extract the smallest available vertex each round for determinism
    std::set<int> ready;
    for (int v = 0; v < g.d; ++v)
        if (indeg[v] == 0) ready.insert(v);
    while (!ready.empty()) {
        const int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int c : ch[v])
            if (--indeg[c] == 0) ready.insert(c);
    }
    if (static_cast<int>(order.size()) != g.d)
        throw std::invalid_argument("dag: graph contains a directed cycle");
    return order;
}

std::vector<int> parents(const Dag& g, int i) {
    if (i < 0 || i >= g.d) throw std::out_of_range("parents: vertex out of range");
    std::vector<int> pa;
    for (const auto& [j, t] : g.edges)
        if (t == i) pa.push_back(j);
    std::sort(pa.begin(), pa.end());
    return pa;
}

bool is_ancestral_set(const Dag& g, const std::set<int>& c) {
    for (int v : c) {
        if (v < 0 || v >= g.d)
            throw std::out_of_range("is_ancestral_set: vertex out of range");
        for (int p : parents(g, v))
            if (!c.count(p)) return false;
    }
    return true;
}

bool is_valid_ordering(const Dag& g, const std::vector<int>& pi) {
    if (static_cast<int>(pi.size()) != g.d)
        throw std::invalid_argument("is_valid_ordering: wrong length");
    std::vector<int> pos(g.d, -1);
    for (int k = 0; k < g.d; ++k) {
        const int v = pi[k];
        if (v < 0 || v >= g.d || pos[v] != -1)
            throw std::invalid_argument("is_valid_ordering: not a permutation");
        pos[v] = k;
    }
    for (const auto& [j, i] : g.edges)
        if (pos[j] > pos[i]) return false;
    return true;
}

bool d_separated(const Dag& g, int x, int y, const std::set<int>& z) {
    if (x == y) throw std::invalid_argument("d_separated: x == y");
    if (z.count(x) || z.count(y))
        throw std::invalid_argument("d_separated: endpoint inside z");
    if (x < 0 || x >= g.d || y < 0 || y >= g.d)
        throw std::out_of_range("d_separated: vertex out of range");

    const auto pa = parent_lists(g);
    const auto ch = children_lists(g);

    // ancestors of z, including z itself
    std::vector<char> anc(g.d, 0);
    std::deque<int> q;
    for (int v : z) {
        anc[v] = 1;
        q.push_back(v);
    }
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (int p : pa[v])
            if (!anc[p]) {
                anc[p] = 1;
                q.push_back(p);
            }
    }

    // reachability over active trails; state = (vertex, arrived-from-child?)
    std::vector<char> seen_up(g.d, 0), seen_down(g.d, 0);
    std::deque<std::pair<int, bool>> frontier;  // bool up = true
    frontier.emplace_back(x, true);
    while (!frontier.empty()) {
        const auto [v, up] = frontier.front();
        frontier.pop_front();
        auto& seen = up ? seen_up : seen_down;
        if (seen[v]) continue;
        seen[v] = 1;
        const bool in_z = z.count(v) != 0;
        if (!in_z && v == y) return false;
        if (up && !in_z) {
            for (int p : pa[v]) frontier.emplace_back(p, true);
            for (int c : ch[v]) frontier.emplace_back(c, false);
        } else if (!up) {
            if (!in_z)
                for (int c : ch[v]) frontier.emplace_back(c, false);
            if (anc[v])  // collider at v (or leading to one) is opened by z
                for (int p : pa[v]) frontier.emplace_back(p, true);
        }
    }
    return true;
}

}  // namespace hcsl
