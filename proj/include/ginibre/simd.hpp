#pragma once

// Hot inner loops with a scalar reference and vector variants. Every variant
// performs the same floating-point operations in the same order (explicit
// fma where the reference uses std::fma), so results are bit-identical and
// the choice of ISA never changes an output file.

#include <cstddef>
#include <span>
#include <string_view>

namespace ginibre::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Best ISA available on this CPU, unless GINIBRE_SIMD=scalar|avx2|neon
/// names a supported one.
Isa active_isa();

/// C += A * B for n x n complex matrices stored row-major as interleaved
/// (re, im) doubles.
void cgemm_accumulate(Isa isa, std::size_t n, const double* a, const double* b, double* c);
inline void cgemm_accumulate(std::size_t n, const double* a, const double* b, double* c) {
    cgemm_accumulate(active_isa(), n, a, b, c);
}

/// Compensated Horner evaluation of sum_k (hi[k] + lo[k]) x^k at every x.
void horner_compensated(Isa isa, std::span<const double> hi, std::span<const double> lo,
                        std::span<const double> x, std::span<double> out);
inline void horner_compensated(std::span<const double> hi, std::span<const double> lo,
                               std::span<const double> x, std::span<double> out) {
    horner_compensated(active_isa(), hi, lo, x, out);
}

namespace detail {
void cgemm_scalar(std::size_t n, const double* a, const double* b, double* c);
void horner_scalar(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                   std::span<double> out);
void cgemm_avx2(std::size_t n, const double* a, const double* b, double* c);
void horner_avx2(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                 std::span<double> out);
void cgemm_neon(std::size_t n, const double* a, const double* b, double* c);
void horner_neon(std::span<const double> hi, std::span<const double> lo, std::span<const double> x,
                 std::span<double> out);
} // namespace detail

} // namespace ginibre::simd
