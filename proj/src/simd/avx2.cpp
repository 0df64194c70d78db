#include "ginibre/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace ginibre::simd::detail {

__attribute__((target("avx2,fma"))) void cgemm_avx2(std::size_t n, const double* a, const double* b,
                                                    double* c) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = a[2 * (i * n + k)];
            const double ai = a[2 * (i * n + k) + 1];
            const __m256d vr = _mm256_set1_pd(ar);
            const __m256d vi = _mm256_setr_pd(-ai, ai, -ai, ai);
            const double* brow = b + 2 * k * n;
            double* crow = c + 2 * i * n;
            std::size_t j = 0;
            for (; j + 2 <= n; j += 2) {
                const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                const __m256d bs = _mm256_permute_pd(bv, 0b0101);
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                cv = _mm256_fmadd_pd(vr, bv, cv);
                cv = _mm256_fmadd_pd(vi, bs, cv);
                _mm256_storeu_pd(crow + 2 * j, cv);
            }
            for (; j < n; ++j) {
                const double br = brow[2 * j], bi = brow[2 * j + 1];
                double cre = crow[2 * j], cim = crow[2 * j + 1];
                cre = __builtin_fma(ar, br, cre);
                cre = __builtin_fma(-ai, bi, cre);
                cim = __builtin_fma(ar, bi, cim);
                cim = __builtin_fma(ai, br, cim);
                crow[2 * j] = cre;
                crow[2 * j + 1] = cim;
            }
        }
    }
}

__attribute__((target("avx2,fma"))) void horner_avx2(std::span<const double> hi, std::span<const double> lo,
                                                     std::span<const double> x, std::span<double> out) {
    const std::size_t deg = hi.size() - 1;
    std::size_t p = 0;
    for (; p + 4 <= x.size(); p += 4) {
        const __m256d xv = _mm256_loadu_pd(x.data() + p);
        __m256d s = _mm256_set1_pd(hi[deg]);
        __m256d c = _mm256_set1_pd(lo[deg]);
        for (std::size_t k = deg; k-- > 0;) {
            const __m256d h = _mm256_set1_pd(hi[k]);
            const __m256d prod = _mm256_mul_pd(s, xv);
            const __m256d perr = _mm256_fmsub_pd(s, xv, prod);
            const __m256d sum = _mm256_add_pd(prod, h);
            const __m256d bb = _mm256_sub_pd(sum, prod);
            const __m256d serr =
                _mm256_add_pd(_mm256_sub_pd(prod, _mm256_sub_pd(sum, bb)), _mm256_sub_pd(h, bb));
            __m256d t = _mm256_add_pd(perr, serr);
            t = _mm256_add_pd(t, _mm256_set1_pd(lo[k]));
            c = _mm256_mul_pd(c, xv);
            c = _mm256_add_pd(c, t);
            s = sum;
        }
        _mm256_storeu_pd(out.data() + p, _mm256_add_pd(s, c));
    }
    if (p < x.size()) horner_scalar(hi, lo, x.subspan(p), out.subspan(p));
}

} // namespace ginibre::simd::detail

#else

namespace ginibre::simd::detail {
void cgemm_avx2(std::size_t n, const double* a, const double* b, double* c) { cgemm_scalar(n, a, b, c); }
void horner_avx2(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                 std::span<double> out) {
    horner_scalar(hi, lo, x, out);
}
} // namespace ginibre::simd::detail

#endif
