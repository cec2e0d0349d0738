#include "hcsl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hcsl/errors.hpp"
#include "hcsl/mathutil.hpp"

namespace hcsl {

const char* primitive_name(Primitive p) {
    switch (p) {
        case Primitive::kLinear: return "linear";
        case Primitive::kSquare: return "square";
        case Primitive::kSine: return "sine";
        case Primitive::kLog: return "log";
        case Primitive::kSigmoid: return "sigmoid";
    }
    throw std::logic_error("primitive_name: bad enum");
}

Primitive primitive_from_name(const std::string& name) {
    for (Primitive p : {Primitive::kLinear, Primitive::kSquare, Primitive::kSine,
                        Primitive::kLog, Primitive::kSigmoid})
        if (name == primitive_name(p)) return p;
    throw DataError("unknown primitive: " + name);
}

namespace {

constexpr double kSClampLo = -4.0;
constexpr double kSClampHi = 4.0;
constexpr double kCoefLo = 0.5;
constexpr double kCoefHi = 2.0;
constexpr double kSHeadScale = 0.5;

double draw_coef(Rng& rng, double scale) {
    const double mag = rng.uniform(kCoefLo, kCoefHi);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return sign * mag * scale;
}

Primitive draw_primitive(Rng& rng) {
    constexpr Primitive all[] = {Primitive::kLinear, Primitive::kSquare,
                                 Primitive::kSine, Primitive::kLog,
                                 Primitive::kSigmoid};
    return all[rng.below(5)];
}

HcmModel sample_model(const Dag& g, std::uint64_t seed, bool nonlinear) {
    validate(g);
    HcmModel m;
    m.g = g;
    m.mechanism = nonlinear ? "nonlinear" : "linear";
    m.nodes.resize(g.d);
    Rng rng(seed);
    for (int i = 0; i < g.d; ++i) {
        for (int j : parents(g, i)) {
            Term t;
            t.parent = j;
            t.prim = nonlinear ? draw_primitive(rng) : Primitive::kLinear;
            t.coef = draw_coef(rng, 1.0);
            m.nodes[i].eta1.push_back(t);
        }
        for (int j : parents(g, i)) {
            Term t;
            t.parent = j;
            t.prim = nonlinear ? draw_primitive(rng) : Primitive::kLinear;
            t.coef = draw_coef(rng, kSHeadScale);
            m.nodes[i].s.push_back(t);
        }
    }
    return m;
}

void accumulate_term(const Term& t, const Dataset& ds, std::vector<double>& out) {
    const double* x = ds.col(static_cast<std::size_t>(t.parent));
    const std::size_t n = ds.n;
    switch (t.prim) {
        case Primitive::kLinear:
            for (std::size_t r = 0; r < n; ++r) out[r] += t.coef * x[r];
            break;
        case Primitive::kSquare:
            for (std::size_t r = 0; r < n; ++r) out[r] += t.coef * x[r] * x[r];
            break;
        case Primitive::kSine:
            for (std::size_t r = 0; r < n; ++r)
                out[r] += t.coef * std::sin(2.0 * std::numbers::pi * x[r]);
            break;
        case Primitive::kLog: {
            const double lo = *std::min_element(x, x + n);
            for (std::size_t r = 0; r < n; ++r)
                out[r] += t.coef * std::log(x[r] - lo + 1.0);
            break;
        }
        case Primitive::kSigmoid:
            for (std::size_t r = 0; r < n; ++r)
                out[r] += t.coef / (1.0 + std::exp(-x[r]));
            break;
    }
}

}  // namespace

HcmModel sample_linear_model(const Dag& g, std::uint64_t seed) {
    return sample_model(g, seed, false);
}

HcmModel sample_nonlinear_model(const Dag& g, std::uint64_t seed) {
    return sample_model(g, seed, true);
}

void eval_node(const HcmModel& m, int node, const Dataset& ds,
               std::vector<double>& eta1, std::vector<double>& s) {
    if (node < 0 || node >= m.g.d) throw std::out_of_range("eval_node: bad node");
    eta1.assign(ds.n, 0.0);
    s.assign(ds.n, 0.0);
    for (const Term& t : m.nodes[node].eta1) accumulate_term(t, ds, eta1);
    for (const Term& t : m.nodes[node].s) accumulate_term(t, ds, s);
    for (double& v : s) v = std::clamp(v, kSClampLo, kSClampHi);
}

Dataset generate(const HcmModel& m, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
    if (static_cast<int>(m.nodes.size()) != m.g.d)
        throw std::invalid_argument("generate: model/graph size mismatch");

    Dataset ds = Dataset::zeros(n, static_cast<std::size_t>(m.g.d));
    Rng noise(seed);
    std::vector<double> eta1, s;
    for (int i : topo_order(m.g)) {
        eval_node(m, i, ds, eta1, s);
        double* x = ds.col(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < n; ++r) {
            const double t = std::exp(s[r]);
            const double mu = eta1[r] / t;
            const double sigma = 1.0 / std::sqrt(t);
            x[r] = mu + sigma * noise.normal();
        }
        for (std::size_t r = 0; r < n; ++r)
            if (!std::isfinite(x[r]))
                throw NumericError("generate: non-finite value at node " +
                                   std::to_string(i));
    }
    return ds;
}

}  // namespace hcsl
