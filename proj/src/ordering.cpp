#include "hcsl/ordering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <span>
#include <stdexcept>

#include "hcsl/errors.hpp"
#include "hcsl/mathutil.hpp"
#include "hcsl/parallel.hpp"
#include "hcsl/shapiro.hpp"

namespace hcsl {

Ordering host_order(const Dataset& data, const OrderConfig& cfg,
                    OrderDiag* diag) {
    if (data.d == 0) throw std::invalid_argument("host_order: empty dataset");
    if (cfg.epsilon < 0.0)
        throw std::invalid_argument("host_order: epsilon must be >= 0");
    const Dataset std_data = standardize(data);
    const int d = static_cast<int>(std_data.d);

    Ordering out;
    std::vector<bool> placed(d, false);
    std::vector<const double*> placed_cols;
    std::size_t fits = 0;
    for (int step = 0; static_cast<int>(out.pi.size()) < d; ++step) {
        std::vector<int> candidates;
        for (int i = 0; i < d; ++i)
            if (!placed[i]) candidates.push_back(i);
        std::vector<double> w(candidates.size());
        parallel_for(candidates.size(), cfg.jobs, [&](std::size_t c) {
            const int node = candidates[c];
            FitConfig fc = cfg.fit;
            fc.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(step),
                                             static_cast<std::uint64_t>(node)});
            const NatParamFit f =
                fit(placed_cols, std_data.col(node), std_data.n, fc);
            const std::vector<double> r =
                residuals(f, placed_cols, std_data.col(node), std_data.n);
            w[c] = shapiro_wilk_w(r).w;
        });
        fits += candidates.size();

        double w_best = w[0];
        for (double wi : w) w_best = std::max(w_best, wi);
        std::vector<double> w_of(d, 0.0);
        std::vector<std::pair<int, double>> trace;
        std::vector<int> layer;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            w_of[candidates[c]] = w[c];
            trace.emplace_back(candidates[c], w[c]);
            if (w_best - w[c] <= cfg.epsilon) layer.push_back(candidates[c]);
        }
        std::sort(layer.begin(), layer.end(), [&](int a, int b) {
            if (w_of[a] != w_of[b]) return w_of[a] > w_of[b];
            return a < b;
        });
        out.w_trace.push_back(std::move(trace));
        for (int node : layer) {
            out.pi.push_back(node);
            placed[node] = true;
            placed_cols.push_back(std_data.col(node));
        }
        out.layers.push_back(std::move(layer));
    }
    if (diag != nullptr) diag->fits = fits;
    return out;
}

Ordering oracle_order(const Dag& g) {
    validate(g);
    Ordering out;
    std::vector<bool> placed(g.d, false);
    int remaining = g.d;
    while (remaining > 0) {
        std::vector<int> layer;
        for (int i = 0; i < g.d; ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (int p : parents(g, i))
                if (!placed[p]) { ready = false; break; }
            if (ready) layer.push_back(i);
        }
        for (int node : layer) placed[node] = true;
        remaining -= static_cast<int>(layer.size());
        out.pi.insert(out.pi.end(), layer.begin(), layer.end());
        out.layers.push_back(std::move(layer));
    }
    return out;
}

Ordering varsort_order(const Dataset& data) {
    if (data.d == 0) throw std::invalid_argument("varsort_order: empty dataset");
    const int d = static_cast<int>(data.d);
    std::vector<std::pair<double, int>> keyed(d);
    for (int j = 0; j < d; ++j)
        keyed[j] = {variance(std::span<const double>(data.col(j), data.n)), j};
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Ordering out;
    for (const auto& [v, j] : keyed) {
        out.pi.push_back(j);
        out.layers.push_back({j});
    }
    return out;
}

Ordering eqvar_order(const Dataset& data) {
    if (data.d == 0) throw std::invalid_argument("eqvar_order: empty dataset");
    if (data.n <= data.d)
        throw std::invalid_argument("eqvar_order: requires n > d");
    const int d = static_cast<int>(data.d);
    const std::size_t n = data.n;
    Ordering out;
    std::vector<bool> placed(d, false);
    std::vector<int> placed_ids;
    while (static_cast<int>(out.pi.size()) < d) {
        int best = -1;
        double best_var = 0.0;
        for (int i = 0; i < d; ++i) {
            if (placed[i]) continue;
            // residual variance of column i after OLS on placed columns
            const std::size_t k = placed_ids.size() + 1;  // with intercept
            std::vector<double> gram(k * k, 0.0), rhs(k, 0.0);
            auto col_at = [&](std::size_t a) -> const double* {
                return a == 0 ? nullptr : data.col(placed_ids[a - 1]);
            };
            const double* y = data.col(i);
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = a; b < k; ++b) {
                    double s = 0.0;
                    if (a == 0 && b == 0) s = static_cast<double>(n);
                    else if (a == 0) {
                        const double* cb = col_at(b);
                        for (std::size_t r = 0; r < n; ++r) s += cb[r];
                    } else {
                        const double* ca = col_at(a);
                        const double* cb = col_at(b);
                        for (std::size_t r = 0; r < n; ++r) s += ca[r] * cb[r];
                    }
                    gram[a * k + b] = gram[b * k + a] = s;
                }
                double s = 0.0;
                if (a == 0) for (std::size_t r = 0; r < n; ++r) s += y[r];
                else {
                    const double* ca = col_at(a);
                    for (std::size_t r = 0; r < n; ++r) s += ca[r] * y[r];
                }
                rhs[a] = s;
            }
            const std::vector<double> beta = cholesky_solve(gram, rhs, k, 1e-8);
            double ss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double pred = beta[0];
                for (std::size_t a = 1; a < k; ++a)
                    pred += beta[a] * data.col(placed_ids[a - 1])[r];
                const double e = y[r] - pred;
                ss += e * e;
            }
            const double rv = ss / static_cast<double>(n);
            if (best < 0 || rv < best_var) {
                best = i;
                best_var = rv;
            }
        }
        out.pi.push_back(best);
        out.layers.push_back({best});
        placed[best] = true;
        placed_ids.push_back(best);
    }
    return out;
}

}  // namespace hcsl
