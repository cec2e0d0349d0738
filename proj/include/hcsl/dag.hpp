#pragma once

#include <set>
#include <utility>
#include <vector>

namespace hcsl {

// Directed acyclic graph on vertices [0, d). Edges are (j -> i) pairs.
// Acyclicity is not enforced by the type; constructors of random graphs
// guarantee it and validate() checks it.
struct Dag {
    int d = 0;
    std::set<std::pair<int, int>> edges;

    bool operator==(const Dag&) const = default;
};

// Causal ordering: pi is a permutation of [0, d); layers partition pi into
// consecutive blocks; w_trace records, for each ordering step, the (node, W)
// pairs of every candidate examined at that step (empty for methods that do
// not compute W).
struct Ordering {
    std::vector<int> pi;
    std::vector<std::vector<int>> layers;
    std::vector<std::vector<std::pair<int, double>>> w_trace;
};

// Throws std::invalid_argument if a vertex index is out of range, an edge is
// a self-loop, or the graph has a directed cycle.
void validate(const Dag& g);

// Topological order (vertex index ascending among simultaneously available
// vertices). Throws if cyclic.
std::vector<int> topo_order(const Dag& g);

// Sorted parent set of vertex i.
std::vector<int> parents(const Dag& g, int i);

// True iff every vertex in c has all its parents inside c.
bool is_ancestral_set(const Dag& g, const std::set<int>& c);

// True iff every edge (j -> i) has j before i in pi. Throws on a malformed
// permutation.
bool is_valid_ordering(const Dag& g, const std::vector<int>& pi);

// d-separation of x and y given z, by reachability over active trails.
// Requires x != y and x, y not in z.
bool d_separated(const Dag& g, int x, int y, const std::set<int>& z);

}  // namespace hcsl
