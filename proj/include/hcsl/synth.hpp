#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"

namespace hcsl {

// Per-parent primitive applied inside a natural-parameter head.
enum class Primitive { kLinear, kSquare, kSine, kLog, kSigmoid };

const char* primitive_name(Primitive p);
Primitive primitive_from_name(const std::string& name);

struct Term {
    int parent = 0;
    Primitive prim = Primitive::kLinear;
    double coef = 0.0;
};

// One node's mechanism: eta1 = sum of eta1 terms; s = ln(-2*eta2) = clamp of
// the sum of s terms to [-4, 4]. Root nodes have no terms, so eta1 = 0 and
// s = 0: exactly standard normal.
struct NodeMechanism {
    std::vector<Term> eta1;
    std::vector<Term> s;
};

// Heteroscedastic causal model: X_i = mu_i(X_pa) + sigma_i(X_pa) * E_i with
// E_i iid standard normal, mu = eta1 / exp(s), sigma^2 = 1 / exp(s).
struct HcmModel {
    Dag g;
    std::string mechanism;  // "linear" | "nonlinear"
    std::vector<NodeMechanism> nodes;
};

// Both heads are homogeneous linear maps of the parent values. Coefficient
// magnitudes are uniform on [0.5, 2] with uniform sign; the s-head
// coefficients are additionally scaled by 0.5 so generated variances stay
// inside [e^-4, e^4] after clamping.
HcmModel sample_linear_model(const Dag& g, std::uint64_t seed);

// Each parent contributes one primitive drawn uniformly from
// {linear, x^2, sin(2*pi*x), ln(x - min(x) + 1), sigmoid}, per head, with
// the same coefficient conventions as the linear sampler.
HcmModel sample_nonlinear_model(const Dag& g, std::uint64_t seed);

// Evaluates node i's heads on already-generated data: writes eta1 and the
// clamped s per row. The kLog primitive uses the minimum of the parent
// column in ds (the generated batch defines the shift).
void eval_node(const HcmModel& m, int node, const Dataset& ds,
               std::vector<double>& eta1, std::vector<double>& s);

// Samples n rows by traversing nodes in topological order; noise uses its
// own stream, so regenerating with a different seed keeps the model file
// unchanged. Throws NumericError naming the node if a non-finite value
// appears.
Dataset generate(const HcmModel& m, std::size_t n, std::uint64_t seed);

}  // namespace hcsl
