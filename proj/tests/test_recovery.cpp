#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"
#include "hcsl/errors.hpp"
#include "hcsl/graph_gen.hpp"
#include "hcsl/mathutil.hpp"
#include "hcsl/ordering.hpp"
#include "hcsl/recovery.hpp"
#include "hcsl/synth.hpp"

using namespace hcsl;

namespace {

std::vector<double> normals(Rng& rng, std::size_t n, double sd = 1.0) {
    std::vector<double> x(n);
    for (double& v : x) v = sd * rng.normal();
    return x;
}

}  // namespace

TEST_CASE("ci_test is deterministic and bounded") {
    Rng rng(401);
    const std::size_t n = 500;
    const std::vector<double> x = normals(rng, n);
    const std::vector<double> y = normals(rng, n);
    CiConfig cfg;
    cfg.seed = 9;
    const CiResult a = ci_test(x.data(), y.data(), {}, n, cfg);
    const CiResult b = ci_test(x.data(), y.data(), {}, n, cfg);
    CHECK(a.p == b.p);
    CHECK(a.stat == b.stat);
    CHECK(a.p > 0.0);
    CHECK(a.p <= 1.0);
    CHECK(a.stat >= 0.0);
    CHECK(a.stat <= 1.0);
}

TEST_CASE("near-deterministic dependence saturates the permutation p-value") {
    Rng rng(402);
    const std::size_t n = 500;
    std::vector<double> x = normals(rng, n), y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.01 * rng.normal();
    CiConfig cfg;
    cfg.seed = 1;
    const CiResult r = ci_test(x.data(), y.data(), {}, n, cfg);
    CHECK(r.p == 1.0 / (cfg.permutations + 1.0));  // no permutation beats T
    CHECK(r.stat > 0.99);
}

TEST_CASE("independent pairs are almost never rejected") {
    int reject_strict = 0, reject_loose = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(403, {static_cast<std::uint64_t>(t)}));
        const std::size_t n = 500;
        const std::vector<double> x = normals(rng, n);
        const std::vector<double> y = normals(rng, n);
        CiConfig cfg;
        cfg.seed = derive_seed(404, {static_cast<std::uint64_t>(t)});
        const CiResult r = ci_test(x.data(), y.data(), {}, n, cfg);
        if (r.p < 0.001) ++reject_strict;
        if (r.p < 0.05) ++reject_loose;
    }
    CHECK(reject_strict <= 1);
    CHECK(reject_loose <= 10);
}

TEST_CASE("conditioning on the mediator removes chain dependence") {
    int nonrejections = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(405, {static_cast<std::uint64_t>(t)}));
        const std::size_t n = 2000;
        std::vector<double> x(n), z(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            z[i] = x[i] + std::exp(0.3 * x[i]) * rng.normal();
            y[i] = z[i] + std::exp(0.3 * z[i]) * rng.normal();
        }
        CiConfig cfg;
        cfg.seed = derive_seed(406, {static_cast<std::uint64_t>(t)});
        const CiResult r = ci_test(x.data(), y.data(), {z.data()}, n, cfg);
        if (r.p >= cfg.alpha) ++nonrejections;
    }
    CHECK(nonrejections >= 19);
}

TEST_CASE("ci_test rejects undersized problems") {
    std::vector<double> x(49, 0.0), y(49, 0.0);
    for (std::size_t i = 0; i < 49; ++i) x[i] = y[i] = static_cast<double>(i);
    CHECK_THROWS_AS(ci_test(x.data(), y.data(), {}, 49, CiConfig{}),
                    std::invalid_argument);
    std::vector<double> x2(60), y2(60);
    Rng rng(407);
    for (std::size_t i = 0; i < 60; ++i) {
        x2[i] = rng.normal();
        y2[i] = rng.normal();
    }
    CiConfig cfg;
    cfg.permutations = 99;
    CHECK_THROWS_AS(ci_test(x2.data(), y2.data(), {}, 60, cfg),
                    std::invalid_argument);
}

TEST_CASE("recover_dag on one node does nothing") {
    Dataset ds = Dataset::zeros(100, 1);
    Rng rng(408);
    for (std::size_t i = 0; i < 100; ++i) ds.col(0)[i] = rng.normal();
    const RecoveryResult r = recover_dag(ds, {0}, CiConfig{});
    CHECK(r.g.d == 1);
    CHECK(r.g.edges.empty());
    CHECK(r.tests == 0);
    CHECK(r.pvalues == std::vector<double>{0.0});
}

TEST_CASE("recover_dag counts tests and orients edges with the ordering") {
    Rng rng(409);
    const std::size_t n = 200;
    Dataset ds = Dataset::zeros(n, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < n; ++i) ds.col(j)[i] = rng.normal();

    const std::vector<int> pi = {2, 0, 3, 1};
    std::vector<int> pos(4);
    for (int i = 0; i < 4; ++i) pos[pi[i]] = i;

    CiConfig cfg;
    cfg.seed = 3;
    const RecoveryResult r = recover_dag(ds, pi, cfg);
    CHECK(r.tests == 6);
    CHECK(r.g.d == 4);
    for (const auto& [tail, head] : r.g.edges) CHECK(pos[tail] < pos[head]);

    // tested pairs carry a p-value in (0,1]; everything else stays 0
    REQUIRE(r.pvalues.size() == 16);
    for (int tail = 0; tail < 4; ++tail)
        for (int head = 0; head < 4; ++head) {
            const double p = r.pvalues[static_cast<std::size_t>(tail) * 4 + head];
            if (pos[tail] < pos[head]) {
                CHECK(p > 0.0);
                CHECK(p <= 1.0);
            } else {
                CHECK(p == 0.0);
            }
        }
}

TEST_CASE("recover_dag is independent of jobs") {
    const Dag g = erdos_renyi(4, 1, 17);
    const Dataset ds = generate(sample_linear_model(g, 18), 400, 19);
    CiConfig cfg;
    cfg.seed = 23;
    const RecoveryResult a = recover_dag(ds, {0, 1, 2, 3}, cfg);
    cfg.jobs = 3;
    const RecoveryResult b = recover_dag(ds, {0, 1, 2, 3}, cfg);
    CHECK(a.g == b.g);
    CHECK(a.pvalues == b.pvalues);
}

TEST_CASE("recover_dag validates the ordering") {
    Dataset ds = Dataset::zeros(60, 2);
    Rng rng(410);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 60; ++i) ds.col(j)[i] = rng.normal();
    CHECK_THROWS_AS(recover_dag(ds, {0}, CiConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(recover_dag(ds, {0, 0}, CiConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(recover_dag(ds, {0, 2}, CiConfig{}), std::invalid_argument);
}

TEST_CASE("two-node pipeline recovers the single edge") {
    const Dag truth{2, {{0, 1}}};
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const HcmModel m = sample_linear_model(truth, derive_seed(seed, {1}));
        const Dataset ds = standardize(generate(m, 5000, derive_seed(seed, {2})));
        OrderConfig ocfg;
        ocfg.seed = derive_seed(seed, {3});
        const Ordering o = host_order(ds, ocfg);
        CiConfig ccfg;
        ccfg.seed = derive_seed(seed, {4});
        const RecoveryResult r = recover_dag(ds, o.pi, ccfg);
        if (r.g == truth) ++hits;
    }
    CHECK(hits >= 4);
}

TEST_CASE("oracle_recover reproduces the graph from an oracle ordering") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int d = 3 + static_cast<int>(seed % 13);
        const Dag g = erdos_renyi(d, 1, derive_seed(411, {seed}));
        const Dag back = oracle_recover(g, oracle_order(g).pi);
        CHECK(back == g);
    }
}

TEST_CASE("oracle_recover on explicit small cases") {
    const Dag edgeless{4, {}};
    CHECK(oracle_recover(edgeless, {3, 1, 0, 2}).edges.empty());

    const Dag chain{3, {{0, 1}, {1, 2}}};
    const Dag back = oracle_recover(chain, {0, 1, 2});
    CHECK(back == chain);  // 0->2 is cut by conditioning on the mediator

    CHECK_THROWS_AS(oracle_recover(chain, {1, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(oracle_recover(chain, {0, 1}), std::invalid_argument);
}
