#include "hcsl/natgauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "hcsl/errors.hpp"
#include "hcsl/kern/kernels.hpp"
#include "hcsl/mathutil.hpp"

namespace hcsl {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr int kPatience = 50;
constexpr int kMaxHalvings = 10;

struct Workspace {
    std::vector<double> e1, s, t, g1, gs, a1, a2, dpre;
};

// forward pass of one head; params points at its packed block
void head_forward(const double* p, int k, int hidden,
                  const std::vector<const double*>& z, std::size_t n,
                  double* out, std::vector<double>& acts) {
    if (hidden == 0) {
        std::fill(out, out + n, p[k]);
        for (int j = 0; j < k; ++j) kern::kaxpy(p[j], z[j], out, n);
        return;
    }
    const int h = hidden;
    const double* w = p;              // h x k
    const double* b = p + h * k;      // h
    const double* v = b + h;          // h
    const double c = v[h];
    acts.resize(static_cast<std::size_t>(h) * n);
    std::fill(out, out + n, c);
    for (int u = 0; u < h; ++u) {
        double* a = acts.data() + static_cast<std::size_t>(u) * n;
        std::fill(a, a + n, b[u]);
        for (int j = 0; j < k; ++j) kern::kaxpy(w[u * k + j], z[j], a, n);
        kern::ktanh(a, a, n);
        kern::kaxpy(v[u], a, out, n);
    }
}

// accumulates d(mean objective)/d(head params) into gp given per-sample
// upstream gradients g (d objective_sum / d head_output)
void head_backward(const double* p, double* gp, int k, int hidden,
                   const std::vector<const double*>& z, std::size_t n,
                   const double* g, const std::vector<double>& acts,
                   std::vector<double>& dpre) {
    const double inv_n = 1.0 / static_cast<double>(n);
    if (hidden == 0) {
        for (int j = 0; j < k; ++j) gp[j] = kern::kdot(z[j], g, n) * inv_n;
        gp[k] = kern::ksum(g, n) * inv_n;
        return;
    }
    const int h = hidden;
    const double* v = p + h * k + h;
    double* gw = gp;
    double* gb = gp + h * k;
    double* gv = gb + h;
    dpre.resize(n);
    for (int u = 0; u < h; ++u) {
        const double* a = acts.data() + static_cast<std::size_t>(u) * n;
        gv[u] = kern::kdot(a, g, n) * inv_n;
        kern::ktanh_backprop(v[u], g, a, dpre.data(), n);
        for (int j = 0; j < k; ++j)
            gw[u * k + j] = kern::kdot(z[j], dpre.data(), n) * inv_n;
        gb[u] = kern::ksum(dpre.data(), n) * inv_n;
    }
    gv[h] = kern::ksum(g, n) * inv_n;  // output bias c
}

double objective_and_gradient_ws(const NatParamModel& m,
                                 const std::vector<const double*>& z,
                                 const double* y, std::size_t n,
                                 std::vector<double>& grad, Workspace& ws) {
    const std::size_t hs = m.head_size();
    grad.assign(m.param_count(), 0.0);
    ws.e1.resize(n);
    ws.s.resize(n);
    ws.t.resize(n);
    ws.g1.resize(n);
    ws.gs.resize(n);
    head_forward(m.theta.data(), m.input_dim, m.hidden, z, n, ws.e1.data(), ws.a1);
    head_forward(m.theta.data() + hs, m.input_dim, m.hidden, z, n, ws.s.data(), ws.a2);
    kern::kexp(ws.s.data(), ws.t.data(), n);
    const double obj = kern::knat_obj_grad(y, ws.e1.data(), ws.s.data(),
                                           ws.t.data(), ws.g1.data(),
                                           ws.gs.data(), n);
    head_backward(m.theta.data(), grad.data(), m.input_dim, m.hidden, z, n,
                  ws.g1.data(), ws.a1, ws.dpre);
    head_backward(m.theta.data() + hs, grad.data() + hs, m.input_dim, m.hidden,
                  z, n, ws.gs.data(), ws.a2, ws.dpre);
    return obj / static_cast<double>(n);
}

void check_finite(const double* x, std::size_t n, const std::string& what) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i])) throw DataError("fit: non-finite value in " + what);
}

}  // namespace

double loglik(double eta1, double eta2, double x) {
    if (!(eta2 < 0.0)) throw std::domain_error("loglik: eta2 must be negative");
    return eta1 * x + eta2 * x * x + eta1 * eta1 / (4.0 * eta2) +
           0.5 * std::log(-2.0 * eta2);
}

Hessian2 loglik_hessian(double eta1, double eta2) {
    if (!(eta2 < 0.0)) throw std::domain_error("loglik_hessian: eta2 must be negative");
    Hessian2 h;
    h.h11 = 1.0 / (2.0 * eta2);
    h.h12 = -eta1 / (2.0 * eta2 * eta2);
    h.h22 = eta1 * eta1 / (2.0 * eta2 * eta2 * eta2) -
            1.0 / (2.0 * eta2 * eta2);
    return h;
}

std::size_t NatParamModel::head_size() const {
    const std::size_t k = static_cast<std::size_t>(input_dim);
    const std::size_t h = static_cast<std::size_t>(hidden);
    return hidden == 0 ? k + 1 : h * k + 2 * h + 1;
}

double objective_and_gradient(const NatParamModel& m,
                              const std::vector<const double*>& z,
                              const double* y, std::size_t n,
                              std::vector<double>& grad) {
    if (z.size() != static_cast<std::size_t>(m.input_dim))
        throw std::invalid_argument("objective_and_gradient: input_dim mismatch");
    Workspace ws;
    return objective_and_gradient_ws(m, z, y, n, grad, ws);
}

NatParamFit fit(const std::vector<const double*>& x_c, const double* x_i,
                std::size_t n, const FitConfig& cfg) {
    if (cfg.lr <= 0.0 || cfg.max_iters < 1)
        throw std::invalid_argument("fit: bad FitConfig");
    if (n < 10) throw DataError("fit: need at least 10 samples");
    const int k = static_cast<int>(x_c.size());
    for (int j = 0; j < k; ++j)
        check_finite(x_c[j], n, "conditioning column " + std::to_string(j));
    check_finite(x_i, n, "target");

    const std::span<const double> target(x_i, n);
    const double ym = mean(target);
    const double yv = variance(target);
    if (yv <= 0.0) throw DataError("fit: constant target");

    NatParamFit f;
    f.in_mean.resize(k);
    f.in_scale.resize(k);
    std::vector<double> zbuf(static_cast<std::size_t>(k) * n);
    std::vector<const double*> z(k);
    for (int j = 0; j < k; ++j) {
        const std::span<const double> cj(x_c[j], n);
        f.in_mean[j] = mean(cj);
        const double v = variance(cj);
        f.in_scale[j] = v > 0.0 ? std::sqrt(v) : 1.0;
        double* zj = zbuf.data() + static_cast<std::size_t>(j) * n;
        for (std::size_t r = 0; r < n; ++r) zj[r] = (cj[r] - f.in_mean[j]) / f.in_scale[j];
        z[j] = zj;
    }

    if (k == 0) {
        f.model.input_dim = 0;
        f.model.hidden = 0;
        f.model.theta = {ym / yv, -std::log(yv)};
        std::vector<double> grad;
        Workspace ws;
        const double obj = objective_and_gradient_ws(f.model, z, x_i, n, grad, ws);
        f.avg_loglik = obj - kHalfLog2Pi;
        f.accepted_objectives = {obj};
        return f;
    }

    NatParamModel m;
    m.input_dim = k;
    m.hidden = cfg.hidden;
    m.theta.assign(m.param_count(), 0.0);
    // intercepts start at the unconditional Gaussian MLE so the starting
    // model (and hence convergence) does not depend on the target's scale
    const std::size_t hs = m.head_size();
    m.theta[hs - 1] = ym / yv;
    m.theta[2 * hs - 1] = -std::log(yv);
    if (cfg.hidden > 0) {
        Rng rng(cfg.seed);
        const double scale = 1.0 / std::sqrt(static_cast<double>(k));
        for (std::size_t head = 0; head < 2; ++head)
            for (int u = 0; u < cfg.hidden * k; ++u)
                m.theta[head * hs + u] = rng.uniform(-scale, scale);
    }

    const std::size_t np = m.param_count();
    std::vector<double> grad, madam(np, 0.0), vadam(np, 0.0);
    Workspace ws;
    NatParamModel best = m;
    double best_obj = -std::numeric_limits<double>::infinity();
    int best_iter = 0;
    double lr = cfg.lr;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double b1p = 1.0, b2p = 1.0;
    int iter = 0;
    int halvings = 0;
    std::vector<double> trace;
    while (iter < cfg.max_iters) {
        ++iter;
        const double obj = objective_and_gradient_ws(m, z, x_i, n, grad, ws);
        if (!std::isfinite(obj)) {
            if (++halvings > kMaxHalvings)
                throw NumericError("fit: non-finite objective at iteration " +
                                   std::to_string(iter) + " after " +
                                   std::to_string(kMaxHalvings) + " rate halvings");
            m = best;
            lr *= 0.5;
            std::fill(madam.begin(), madam.end(), 0.0);
            std::fill(vadam.begin(), vadam.end(), 0.0);
            b1p = b2p = 1.0;
            continue;
        }
        if (obj > best_obj + cfg.tol) {
            best_obj = obj;
            best = m;
            best_iter = iter;
            trace.push_back(obj);
        } else if (iter - best_iter >= kPatience) {
            break;
        }
        b1p *= b1;
        b2p *= b2;
        for (std::size_t i = 0; i < np; ++i) {
            madam[i] = b1 * madam[i] + (1.0 - b1) * grad[i];
            vadam[i] = b2 * vadam[i] + (1.0 - b2) * grad[i] * grad[i];
            const double mh = madam[i] / (1.0 - b1p);
            const double vh = vadam[i] / (1.0 - b2p);
            m.theta[i] += lr * mh / (std::sqrt(vh) + eps);
        }
    }

    f.model = best;
    f.avg_loglik = best_obj - kHalfLog2Pi;
    f.iterations = iter;
    f.halvings = halvings;
    f.accepted_objectives = std::move(trace);
    return f;
}

namespace {

void forward_destd(const NatParamFit& f, const std::vector<const double*>& x_c,
                   std::size_t n, std::vector<double>& e1, std::vector<double>& s,
                   std::vector<double>& t) {
    const int k = f.model.input_dim;
    if (x_c.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("natgauss: conditioning dimension mismatch");
    std::vector<double> zbuf(static_cast<std::size_t>(k) * n);
    std::vector<const double*> z(k);
    for (int j = 0; j < k; ++j) {
        double* zj = zbuf.data() + static_cast<std::size_t>(j) * n;
        for (std::size_t r = 0; r < n; ++r)
            zj[r] = (x_c[j][r] - f.in_mean[j]) / f.in_scale[j];
        z[j] = zj;
    }
    e1.resize(n);
    s.resize(n);
    t.resize(n);
    std::vector<double> acts;
    head_forward(f.model.theta.data(), k, f.model.hidden, z, n, e1.data(), acts);
    head_forward(f.model.theta.data() + f.model.head_size(), k, f.model.hidden,
                 z, n, s.data(), acts);
    kern::kexp(s.data(), t.data(), n);
}

}  // namespace

std::vector<double> residuals(const NatParamFit& f,
                              const std::vector<const double*>& x_c,
                              const double* x_i, std::size_t n) {
    std::vector<double> e1, s, t;
    forward_destd(f, x_c, n, e1, s, t);
    std::vector<double> u(n);
    for (std::size_t r = 0; r < n; ++r)
        u[r] = (x_i[r] - e1[r] / t[r]) * std::sqrt(t[r]);
    return u;
}

void predict(const NatParamFit& f, const std::vector<const double*>& x_c,
             std::size_t n, std::vector<double>& mu, std::vector<double>& sigma) {
    std::vector<double> e1, s, t;
    forward_destd(f, x_c, n, e1, s, t);
    mu.resize(n);
    sigma.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        mu[r] = e1[r] / t[r];
        sigma[r] = 1.0 / std::sqrt(t[r]);
    }
}

}  // namespace hcsl
