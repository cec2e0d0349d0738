#include "hcsl/kern/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace hcsl::kern {

namespace scalar {

double ksum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double kdot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void kaxpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void kexp(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v > 708.0) v = 708.0;
        if (v < -708.0) v = -708.0;
        out[i] = std::exp(v);
    }
}

void ktanh(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(x[i]);
}

double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = y[i], ei = e1[i], ti = t[i];
        const double inv_t = 1.0 / ti;
        const double ei_over_t = ei * inv_t;
        const double ty = ti * yi;
        obj += ei * yi - 0.5 * ty * yi - 0.5 * ei * ei_over_t + 0.5 * s[i];
        g1[i] = yi - ei_over_t;
        gs[i] = 0.5 * (ei * ei_over_t - ty * yi + 1.0);
    }
    return obj;
}

void ktanh_backprop(double w, const double* gout, const double* a,
                    double* dpre, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dpre[i] = w * gout[i] * (1.0 - a[i] * a[i]);
}

}  // namespace scalar

namespace {

struct Backend {
    const char* name;
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*vexp)(const double*, double*, std::size_t);
    void (*vtanh)(const double*, double*, std::size_t);
    double (*nat)(const double*, const double*, const double*, const double*,
                  double*, double*, std::size_t);
    void (*tanh_bp)(double, const double*, const double*, double*, std::size_t);
};

constexpr Backend kScalarBackend = {
    "scalar",        scalar::ksum, scalar::kdot,          scalar::kaxpy,
    scalar::kexp,    scalar::ktanh, scalar::knat_obj_grad, scalar::ktanh_backprop,
};

#if defined(HCSL_HAVE_AVX2)
constexpr Backend kAvx2Backend = {
    "avx2",        avx2::ksum, avx2::kdot,          avx2::kaxpy,
    avx2::kexp,    avx2::ktanh, avx2::knat_obj_grad, avx2::ktanh_backprop,
};
#endif

Backend select_backend() {
    const char* force = std::getenv("HCSL_SIMD");
    if (force != nullptr && std::strcmp(force, "scalar") == 0)
        return kScalarBackend;
#if defined(HCSL_HAVE_AVX2)
    if (cpu_has_avx2() && (force == nullptr || std::strcmp(force, "avx2") == 0))
        return kAvx2Backend;
#endif
    return kScalarBackend;
}

const Backend& backend() {
    static const Backend b = select_backend();
    return b;
}

}  // namespace

double ksum(const double* x, std::size_t n) { return backend().sum(x, n); }

double kdot(const double* x, const double* y, std::size_t n) {
    return backend().dot(x, y, n);
}

void kaxpy(double a, const double* x, double* y, std::size_t n) {
    backend().axpy(a, x, y, n);
}

void kexp(const double* x, double* out, std::size_t n) {
    backend().vexp(x, out, n);
}

void ktanh(const double* x, double* out, std::size_t n) {
    backend().vtanh(x, out, n);
}

double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n) {
    return backend().nat(y, e1, s, t, g1, gs, n);
}

void ktanh_backprop(double w, const double* gout, const double* a,
                    double* dpre, std::size_t n) {
    backend().tanh_bp(w, gout, a, dpre, n);
}

const char* backend_name() { return backend().name; }

}  // namespace hcsl::kern
