#include "hcsl/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>

#include "hcsl/errors.hpp"
#include "hcsl/kern/kernels.hpp"
#include "hcsl/mathutil.hpp"
#include "hcsl/parallel.hpp"

namespace hcsl {

namespace {

// midranks centered to mean zero; returns the centered ranks and their norm
std::vector<double> centered_ranks(std::span<const double> x, double& norm) {
    std::vector<double> r = midranks(x);
    const double m = mean(r);
    double ss = 0.0;
    for (double& v : r) {
        v -= m;
        ss += v * v;
    }
    norm = std::sqrt(ss);
    return r;
}

void check_permutation(const std::vector<int>& pi, std::size_t d,
                       const char* who) {
    if (pi.size() != d)
        throw std::invalid_argument(std::string(who) + ": ordering size mismatch");
    std::vector<bool> seen(d, false);
    for (int v : pi) {
        if (v < 0 || static_cast<std::size_t>(v) >= d || seen[v])
            throw std::invalid_argument(std::string(who) +
                                        ": not a permutation of the columns");
        seen[v] = true;
    }
}

}  // namespace

CiResult ci_test(const double* x, const double* y,
                 const std::vector<const double*>& z, std::size_t n,
                 const CiConfig& cfg) {
    if (n < 50) throw std::invalid_argument("ci_test: need at least 50 samples");
    if (cfg.permutations < 100)
        throw std::invalid_argument("ci_test: need at least 100 permutations");

    FitConfig fx = cfg.fit;
    fx.seed = derive_seed(cfg.seed, {1});
    const NatParamFit mx = fit(z, x, n, fx);
    const std::vector<double> rx = residuals(mx, z, x, n);

    FitConfig fy = cfg.fit;
    fy.seed = derive_seed(cfg.seed, {2});
    const NatParamFit my = fit(z, y, n, fy);
    const std::vector<double> ry = residuals(my, z, y, n);

    double nx = 0.0, ny = 0.0;
    const std::vector<double> u = centered_ranks(rx, nx);
    std::vector<double> v = centered_ranks(ry, ny);
    if (nx == 0.0 || ny == 0.0)
        throw DataError("ci_test: constant residual ranks");
    const double scale = 1.0 / (nx * ny);
    const double t_obs = std::abs(kern::kdot(u.data(), v.data(), n)) * scale;

    Rng perm(derive_seed(cfg.seed, {3}));
    int count = 0;
    for (int b = 0; b < cfg.permutations; ++b) {
        perm.shuffle(v);
        const double t = std::abs(kern::kdot(u.data(), v.data(), n)) * scale;
        if (t >= t_obs) ++count;
    }
    CiResult out;
    out.stat = t_obs;
    out.p = (1.0 + count) / (cfg.permutations + 1.0);
    return out;
}

RecoveryResult recover_dag(const Dataset& data, const std::vector<int>& pi,
                           const CiConfig& cfg) {
    check_permutation(pi, data.d, "recover_dag");
    const int d = static_cast<int>(data.d);
    RecoveryResult out;
    out.g.d = d;
    out.pvalues.assign(data.d * data.d, 0.0);

    // flatten (i, j) position pairs so tests parallelize uniformly
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j) pairs.emplace_back(i, j);
    std::vector<double> pvals(pairs.size());
    parallel_for(pairs.size(), cfg.jobs, [&](std::size_t t) {
        const auto [i, j] = pairs[t];
        std::vector<const double*> z;
        for (int a = 0; a < i; ++a)
            if (a != j) z.push_back(data.col(pi[a]));
        CiConfig local = cfg;
        local.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(j)});
        pvals[t] = ci_test(data.col(pi[j]), data.col(pi[i]), z, data.n, local).p;
    });
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [i, j] = pairs[t];
        out.pvalues[static_cast<std::size_t>(pi[j]) * data.d + pi[i]] = pvals[t];
        if (pvals[t] < cfg.alpha) out.g.edges.insert({pi[j], pi[i]});
    }
    out.tests = pairs.size();
    return out;
}

Dag oracle_recover(const Dag& g, const std::vector<int>& pi) {
    validate(g);
    if (!is_valid_ordering(g, pi))
        throw std::invalid_argument(
            "oracle_recover: ordering is not topological for the graph");
    Dag out;
    out.d = g.d;
    for (int i = 1; i < g.d; ++i) {
        for (int j = 0; j < i; ++j) {
            std::set<int> z;
            for (int a = 0; a < i; ++a)
                if (a != j) z.insert(pi[a]);
            if (!d_separated(g, pi[j], pi[i], z)) out.edges.insert({pi[j], pi[i]});
        }
    }
    return out;
}

}  // namespace hcsl
