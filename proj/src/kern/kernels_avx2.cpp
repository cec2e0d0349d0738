// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma -ffp-contract=off:
// the intrinsics below use FMA explicitly where divergence from the scalar
// reference is tolerated (reductions, exp/tanh polynomials); the scalar tail
// loops must not be auto-contracted or they would stop matching the
// reference bit-for-bit.

#include "hcsl/kern/kernels.hpp"

#if defined(HCSL_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace hcsl::kern {

bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

// exp via range reduction x = n ln2 + r, |r| <= ln2/2, degree-13 Taylor on r,
// exponent reassembly through the IEEE bit layout. Inputs are pre-clamped to
// [-708, 708] so n stays within the exponent range.
inline __m256d vexp4(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d hi = _mm256_set1_pd(708.0);
    const __m256d lo = _mm256_set1_pd(-708.0);

    x = _mm256_min_pd(x, hi);
    x = _mm256_max_pd(x, lo);

    __m256d nf = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, ln2_hi, x);
    r = _mm256_fnmadd_pd(nf, ln2_lo, r);

    const double kInvFact[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
        1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
        1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
        1.0 / 24.0,         1.0 / 6.0,         0.5,
        1.0,                1.0};
    __m256d p = _mm256_set1_pd(kInvFact[0]);
    for (int i = 1; i < 14; ++i)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));

    __m128i n32 = _mm256_cvtpd_epi32(nf);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline double scalar_exp_clamped(double v) {
    if (v > 708.0) v = 708.0;
    if (v < -708.0) v = -708.0;
    return std::exp(v);
}

}  // namespace

double ksum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double kdot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void kaxpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // mul+add, not fmadd: must match the non-contracted scalar reference
        __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void kexp(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, vexp4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = scalar_exp_clamped(x[i]);
}

void ktanh(const double* x, double* out, std::size_t n) {
    // tanh = (e^{2x}-1)/(e^{2x}+1); a cubic Taylor blend below |x| = 1e-4
    // avoids the cancellation in e^{2x}-1 near zero.
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d small = _mm256_set1_pd(1e-4);
    const __m256d third = _mm256_set1_pd(1.0 / 3.0);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d e = vexp4(_mm256_mul_pd(two, v));
        __m256d big = _mm256_div_pd(_mm256_sub_pd(e, one), _mm256_add_pd(e, one));
        __m256d v2 = _mm256_mul_pd(v, v);
        __m256d tiny = _mm256_mul_pd(v, _mm256_fnmadd_pd(v2, third, one));
        __m256d mask = _mm256_cmp_pd(_mm256_and_pd(v, absmask), small, _CMP_LT_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(big, tiny, mask));
    }
    for (; i < n; ++i) {
        double v = x[i];
        if (std::fabs(v) < 1e-4) {
            out[i] = v * (1.0 - v * v / 3.0);
        } else {
            double e = scalar_exp_clamped(2.0 * v);
            out[i] = (e - 1.0) / (e + 1.0);
        }
    }
}

double knat_obj_grad(const double* y, const double* e1, const double* s,
                     const double* t, double* g1, double* gs, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yi = _mm256_loadu_pd(y + i);
        __m256d ei = _mm256_loadu_pd(e1 + i);
        __m256d si = _mm256_loadu_pd(s + i);
        __m256d ti = _mm256_loadu_pd(t + i);
        __m256d inv_t = _mm256_div_pd(one, ti);
        __m256d ei_over_t = _mm256_mul_pd(ei, inv_t);
        __m256d ty = _mm256_mul_pd(ti, yi);
        // element ops mirror the scalar reference exactly (no FMA)
        _mm256_storeu_pd(g1 + i, _mm256_sub_pd(yi, ei_over_t));
        __m256d m1 = _mm256_mul_pd(ei, ei_over_t);
        __m256d m2 = _mm256_mul_pd(ty, yi);
        __m256d gsd = _mm256_mul_pd(half, _mm256_add_pd(_mm256_sub_pd(m1, m2), one));
        _mm256_storeu_pd(gs + i, gsd);
        __m256d term = _mm256_sub_pd(_mm256_mul_pd(ei, yi),
                                     _mm256_mul_pd(half, m2));
        term = _mm256_sub_pd(term, _mm256_mul_pd(half, m1));
        term = _mm256_add_pd(term, _mm256_mul_pd(half, si));
        acc = _mm256_add_pd(acc, term);
    }
    double obj = hsum(acc);
    for (; i < n; ++i) {
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
    const __m256d wv = _mm256_set1_pd(w);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ai = _mm256_loadu_pd(a + i);
        __m256d gi = _mm256_loadu_pd(gout + i);
        __m256d wg = _mm256_mul_pd(wv, gi);
        __m256d om = _mm256_sub_pd(one, _mm256_mul_pd(ai, ai));
        _mm256_storeu_pd(dpre + i, _mm256_mul_pd(wg, om));
    }
    for (; i < n; ++i) dpre[i] = w * gout[i] * (1.0 - a[i] * a[i]);
}

}  // namespace avx2

}  // namespace hcsl::kern

#endif  // HCSL_HAVE_AVX2
