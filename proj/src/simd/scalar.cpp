#include "ginibre/simd.hpp"

#include <cmath>

namespace ginibre::simd::detail {

void cgemm_scalar(std::size_t n, const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double ar = a[2 * (i * n + k)];
            const double ai = a[2 * (i * n + k) + 1];
            const double* brow = b + 2 * k * n;
            double* crow = c + 2 * i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double br = brow[2 * j], bi = brow[2 * j + 1];
                double cre = crow[2 * j], cim = crow[2 * j + 1];
                cre = std::fma(ar, br, cre);
                cre = std::fma(-ai, bi, cre);
                cim = std::fma(ar, bi, cim);
                cim = std::fma(ai, br, cim);
                crow[2 * j] = cre;
                crow[2 * j + 1] = cim;
            }
        }
    }
}

// Graillat-Langlois-Louvet compensated Horner; the low parts of the
// coefficients enter through the correction polynomial.
void horner_scalar(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                   std::span<double> out) {
    const std::size_t deg = hi.size() - 1;
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double xv = x[p];
        double s = hi[deg];
        double c = lo[deg];
        for (std::size_t k = deg; k-- > 0;) {
            const double prod = s * xv;
            const double perr = std::fma(s, xv, -prod);
            const double sum = prod + hi[k];
            const double bb = sum - prod;
            const double serr = (prod - (sum - bb)) + (hi[k] - bb);
            double t = perr + serr;
            t = t + lo[k];
            c = c * xv;
            c = c + t;
            s = sum;
        }
        out[p] = s + c;
    }
}

} // namespace ginibre::simd::detail
