#pragma once

#include <cstdint>
#include <vector>

namespace hcsl {

// Gaussian natural parametrization used throughout: eta1 = mu/sigma^2,
// eta2 = -1/(2 sigma^2) < 0. The trained representation is s = ln(-2 eta2)
// (so eta2 = -exp(s)/2 is negative structurally) together with eta1.

// Log-likelihood of x under (eta1, eta2), up to the additive constant
// -ln(2 pi)/2:  eta1*x + eta2*x^2 + eta1^2/(4 eta2) + ln(-2 eta2)/2.
// Throws std::domain_error if eta2 >= 0.
double loglik(double eta1, double eta2, double x);

// 2x2 Hessian of loglik with respect to (eta1, eta2); the objective is
// jointly concave in these coordinates (negative semidefinite everywhere on
// eta2 < 0), unlike in the trained (eta1, s) coordinates.
struct Hessian2 {
    double h11, h12, h22;
};
Hessian2 loglik_hessian(double eta1, double eta2);

struct FitConfig {
    double lr = 1e-2;        // Adam step size
    int max_iters = 2000;
    double tol = 1e-6;       // minimum best-objective improvement to accept
    int hidden = 0;          // units per head; 0 = linear heads
    std::uint64_t seed = 0;  // stream for hidden-layer initialization
};

// Two heads over the standardized conditioning inputs z (k columns):
// eta1(z) and s(z). Linear head parameters pack as [w(k), b]; a hidden head
// packs as [W(H x k, row-major), b(H), v(H), c] computing
// v . tanh(W z + b) + c. theta = eta1-head params then s-head params.
struct NatParamModel {
    int input_dim = 0;
    int hidden = 0;
    std::vector<double> theta;

    std::size_t head_size() const;
    std::size_t param_count() const { return 2 * head_size(); }
};

struct NatParamFit {
    NatParamModel model;
    std::vector<double> in_mean;   // per conditioning column
    std::vector<double> in_scale;  // 1 substituted for zero-variance columns
    double avg_loglik = 0.0;       // mean log-density at the returned params
    int iterations = 0;            // gradient evaluations performed
    int halvings = 0;              // non-finite recoveries
    std::vector<double> accepted_objectives;  // non-decreasing by construction
};

// Maximizes the empirical mean of loglik(eta1(z), eta2(z), x_i) by
// full-batch Adam ascent over theta. Conditioning columns are standardized
// internally and the constants stored; the target stays raw. |C| = 0 skips
// optimization: the closed form is mu = sample mean, sigma^2 = biased
// sample variance. Heads start at the unconditional Gaussian: intercepts at
// the closed-form MLE, input weights zero (hidden layers draw seeded uniform
// +-1/sqrt(k) input weights, output weights zero), so the starting model is
// invariant to the target's scale. An iteration is accepted when it
// improves the best objective by
// more than tol; the best parameters are returned. The search stops after
// 50 iterations without an accepted improvement. A non-finite objective
// restarts from the best parameters at half the rate; after 10 halvings
// NumericError is thrown with the iteration index.
//
// Throws DataError for n < 10, non-finite inputs, or a constant target.
NatParamFit fit(const std::vector<const double*>& x_c, const double* x_i,
                std::size_t n, const FitConfig& cfg);

// Standardized residuals (x_i - mu(x_c)) / sigma(x_c). Throws
// std::invalid_argument on an input-dimension mismatch.
std::vector<double> residuals(const NatParamFit& f,
                              const std::vector<const double*>& x_c,
                              const double* x_i, std::size_t n);

// Fitted conditional mean and standard deviation per row.
void predict(const NatParamFit& f, const std::vector<const double*>& x_c,
             std::size_t n, std::vector<double>& mu, std::vector<double>& sigma);

// Mean objective (up to -ln(2 pi)/2) and its exact analytic gradient with
// respect to theta, on an explicit batch: z holds the model's conditioning
// inputs (already in model coordinates), y the targets. Contract-tested
// against central finite differences.
double objective_and_gradient(const NatParamModel& m,
                              const std::vector<const double*>& z,
                              const double* y, std::size_t n,
                              std::vector<double>& grad);

}  // namespace hcsl
