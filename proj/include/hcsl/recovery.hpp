#pragma once

#include <cstdint>
#include <vector>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"
#include "hcsl/natgauss.hpp"

namespace hcsl {

struct CiConfig {
    double alpha = 0.001;     // rejection threshold (edge kept iff p < alpha)
    int permutations = 1000;  // must be >= 100 so min p = 1/(B+1) < alpha
    FitConfig fit;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct CiResult {
    double p = 1.0;     // permutation p-value, in (0, 1]
    double stat = 0.0;  // |Spearman rho| between the two residual series
};

// Conditional independence of x and y given the columns z: fits each of x
// and y on z (seeds derived from cfg.seed with tags 1 and 2), then measures
// |Spearman rho| between the residual series and compares it against
// cfg.permutations random relabelings of one side (stream tag 3).
// p = (1 + #{T_perm >= T}) / (B + 1). Requires n >= 50 and
// permutations >= 100.
CiResult ci_test(const double* x, const double* y,
                 const std::vector<const double*>& z, std::size_t n,
                 const CiConfig& cfg);

struct RecoveryResult {
    Dag g;
    // p-values by original node ids: entry [tail * d + head] holds the test
    // of (tail, head) for tail earlier than head in the ordering; 0 where no
    // test ran (diagonal and later-to-earlier positions).
    std::vector<double> pvalues;
    std::size_t tests = 0;  // always d * (d - 1) / 2
};

// Prunes a full ordering into a DAG: for each later position i and earlier
// position j, tests pi[j] against pi[i] given the other predecessors of
// pi[i], and keeps the edge pi[j] -> pi[i] iff p < alpha. Per-test seeds
// derive from (seed, i, j) by position, so the result is independent of
// execution order and of jobs. Throws std::invalid_argument if pi is not a
// permutation of the dataset's columns.
RecoveryResult recover_dag(const Dataset& data, const std::vector<int>& pi,
                           const CiConfig& cfg);

// The same pruning with d-separation in a known DAG replacing the CI test:
// keeps pi[j] -> pi[i] iff pi[j] and pi[i] are d-connected given the other
// predecessors. pi must be a valid topological ordering of g (throws
// std::invalid_argument otherwise); the result then equals g exactly.
Dag oracle_recover(const Dag& g, const std::vector<int>& pi);

}  // namespace hcsl
