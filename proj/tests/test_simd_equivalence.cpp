// Every vector variant must reproduce the scalar reference bit for bit.

#include "ginibre/polynomial.hpp"
#include "ginibre/simd.hpp"

#include <doctest.h>

#include <complex>
#include <cstring>
#include <random>
#include <vector>

using namespace ginibre;

namespace {

std::vector<simd::Isa> vector_isas() {
    std::vector<simd::Isa> out;
    for (auto isa : {simd::Isa::avx2, simd::Isa::neon})
        if (simd::isa_supported(isa)) out.push_back(isa);
    return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("dispatch") {
    CHECK(simd::isa_supported(simd::Isa::scalar));
    CHECK(simd::isa_supported(simd::active_isa()));
    CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
    MESSAGE("active ISA: " << simd::isa_name(simd::active_isa()));
}

TEST_CASE("scalar cgemm is a complex matrix product") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    const std::size_t n = 4;
    std::vector<double> a(2 * n * n), b(2 * n * n), c(2 * n * n, 0.0);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    simd::cgemm_accumulate(simd::Isa::scalar, n, a.data(), b.data(), c.data());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += std::complex<double>(a[2 * (i * n + k)], a[2 * (i * n + k) + 1]) *
                     std::complex<double>(b[2 * (k * n + j)], b[2 * (k * n + j) + 1]);
            CHECK(std::abs(c[2 * (i * n + j)] - s.real()) < 1e-13);
            CHECK(std::abs(c[2 * (i * n + j) + 1] - s.imag()) < 1e-13);
        }
}

TEST_CASE("cgemm variants agree bitwise") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    for (auto isa : vector_isas()) {
        for (std::size_t n : {1, 2, 3, 4, 7, 16, 33, 64}) {
            std::vector<double> a(2 * n * n), b(2 * n * n), c0(2 * n * n);
            for (auto& v : a) v = g(rng);
            for (auto& v : b) v = g(rng);
            for (auto& v : c0) v = g(rng);
            auto c1 = c0;
            simd::cgemm_accumulate(simd::Isa::scalar, n, a.data(), b.data(), c0.data());
            simd::cgemm_accumulate(isa, n, a.data(), b.data(), c1.data());
            CHECK_MESSAGE(same_bits(c0, c1), simd::isa_name(isa) << " n=" << n);
        }
    }
}

TEST_CASE("compensated Horner variants agree bitwise") {
    for (auto isa : vector_isas()) {
        for (int M : {1, 2, 4})
            for (int n : {0, 1, 5, 11, 12}) {
                const auto p = p_polynomial(n, M);
                std::vector<double> hi, lo;
                for (const auto& c : p.coefficients()) {
                    const double h = c.convert_to<double>();
                    hi.push_back(h);
                    lo.push_back((c - BigInt(h)).convert_to<double>());
                }
                // odd lengths exercise the remainder loop
                for (std::size_t len : {1, 3, 4, 9, 64}) {
                    std::vector<double> x(len), y0(len), y1(len);
                    for (std::size_t i = 0; i < len; ++i) x[i] = 1e-3 + 0.77 * i * (n + 1);
                    simd::horner_compensated(simd::Isa::scalar, hi, lo, x, y0);
                    simd::horner_compensated(isa, hi, lo, x, y1);
                    CHECK_MESSAGE(same_bits(y0, y1), simd::isa_name(isa) << " M=" << M << " n=" << n);
                }
            }
    }
}

TEST_CASE("unsupported ISA is rejected") {
    for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
        if (simd::isa_supported(isa)) continue;
        double x = 1.0, y = 0.0, h = 1.0, l = 0.0;
        CHECK_THROWS(simd::horner_compensated(isa, std::span(&h, 1), std::span(&l, 1), std::span(&x, 1),
                                              std::span(&y, 1)));
    }
}
