#pragma once

#include <cstddef>

// Low-level array kernels used by the fitting hot path. Every kernel has a
// scalar reference implementation and, on x86-64 with AVX2+FMA, a vectorized
// variant selected once at startup. Element-wise kernels (axpy, the gradient
// kernel's per-sample outputs) produce bit-identical results on both
// backends; reductions (sum, dot, the returned objective) may differ in
// summation order, and exp/tanh in the AVX2 path are polynomial
// approximations accurate to ~1e-14 relative. Set HCSL_SIMD=scalar in the
// environment to force the reference path.

namespace hcsl::kern {

// sum of x[0..n)
double ksum(const double* x, std::size_t n);

// dot product of x and y
double kdot(const double* x, const double* y, std::size_t n);

// y[i] += a * x[i]
void kaxpy(double a, const double* x, double* y, std::size_t n);

// out[i] = exp(x[i]), inputs saturated to [-708, 708] on both backends
void kexp(const double* x, double* out, std::size_t n);

// out[i] = tanh(x[i])
void ktanh(const double* x, double* out, std::size_t n);

// Joint objective/gradient kernel for the natural-parameter Gaussian
// log-likelihood. Inputs per sample: target y, mean head output e1,
// log-precision head output s, and t = exp(s). Writes the per-sample
// gradients g1[i] = y - e1/t (w.r.t. e1) and
// gs[i] = 0.5*(e1^2/t - t*y^2 + 1) (w.r.t. s), and returns
// sum_i [ e1*y - t*y^2/2 - e1^2/(2t) + s/2 ].
double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n);

// dpre[i] = w * gout[i] * (1 - a[i]^2), the backward step through tanh
// activations a with upstream gradient gout and output weight w.
void ktanh_backprop(double w, const double* gout, const double* a,
                    double* dpre, std::size_t n);

// Name of the backend selected at startup ("avx2" or "scalar").
const char* backend_name();

// Scalar reference implementations, always available (used directly by the
// equivalence tests and by the HCSL_SIMD=scalar override).
namespace scalar {
double ksum(const double* x, std::size_t n);
double kdot(const double* x, const double* y, std::size_t n);
void kaxpy(double a, const double* x, double* y, std::size_t n);
void kexp(const double* x, double* out, std::size_t n);
void ktanh(const double* x, double* out, std::size_t n);
double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n);
void ktanh_backprop(double w, const double* gout, const double* a,
                    double* dpre, std::size_t n);
}  // namespace scalar

#if defined(HCSL_HAVE_AVX2)
// AVX2+FMA variants; only safe to call when the CPU supports both (the
// dispatcher checks, the tests check before exercising them directly).
namespace avx2 {
double ksum(const double* x, std::size_t n);
double kdot(const double* x, const double* y, std::size_t n);
void kaxpy(double a, const double* x, double* y, std::size_t n);
void kexp(const double* x, double* out, std::size_t n);
void ktanh(const double* x, double* out, std::size_t n);
double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n);
void ktanh_backprop(double w, const double* gout, const double* a,
                    double* dpre, std::size_t n);
}  // namespace avx2

bool cpu_has_avx2();
#endif

}  // namespace hcsl::kern
