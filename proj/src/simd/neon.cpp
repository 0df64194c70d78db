#include "ginibre/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace ginibre::simd::detail {

void cgemm_neon(std::size_t n, const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = a[2 * (i * n + k)];
            const double ai = a[2 * (i * n + k) + 1];
            const float64x2_t vr = vdupq_n_f64(ar);
            const float64x2_t vi = {-ai, ai};
            const double* brow = b + 2 * k * n;
            double* crow = c + 2 * i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const float64x2_t bv = vld1q_f64(brow + 2 * j);
                const float64x2_t bs = vextq_f64(bv, bv, 1);
                float64x2_t cv = vld1q_f64(crow + 2 * j);
                cv = vfmaq_f64(cv, vr, bv);
                cv = vfmaq_f64(cv, vi, bs);
                vst1q_f64(crow + 2 * j, cv);
            }
        }
    }
}

void horner_neon(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                 std::span<double> out) {
    const std::size_t deg = hi.size() - 1;
    std::size_t p = 0;
    for (; p + 2 <= x.size(); p += 2) {
        const float64x2_t xv = vld1q_f64(x.data() + p);
        float64x2_t s = vdupq_n_f64(hi[deg]);
        float64x2_t c = vdupq_n_f64(lo[deg]);
        for (std::size_t k = deg; k-- > 0;) {
            const float64x2_t h = vdupq_n_f64(hi[k]);
            const float64x2_t prod = vmulq_f64(s, xv);
            const float64x2_t perr = vfmaq_f64(vnegq_f64(prod), s, xv);
            const float64x2_t sum = vaddq_f64(prod, h);
            const float64x2_t bb = vsubq_f64(sum, prod);
            const float64x2_t serr = vaddq_f64(vsubq_f64(prod, vsubq_f64(sum, bb)), vsubq_f64(h, bb));
            float64x2_t t = vaddq_f64(perr, serr);
            t = vaddq_f64(t, vdupq_n_f64(lo[k]));
            c = vmulq_f64(c, xv);
            c = vaddq_f64(c, t);
            s = sum;
        }
        vst1q_f64(out.data() + p, vaddq_f64(s, c));
    }
    if (p < x.size()) horner_scalar(hi, lo, x.subspan(p), out.subspan(p));
}

} // namespace ginibre::simd::detail

#else

namespace ginibre::simd::detail {
void cgemm_neon(std::size_t n, const double* a, const double* b, double* c) { cgemm_scalar(n, a, b, c); }
void horner_neon(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                 std::span<double> out) {
    horner_scalar(hi, lo, x, out);
}
} // namespace ginibre::simd::detail

#endif
