#include "ginibre/simd.hpp"

#include "ginibre/errors.hpp"

#include <cstdlib>
#include <string>

namespace ginibre::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

namespace {
Isa detect() {
    if (const char* env = std::getenv("GINIBRE_SIMD")) {
        const std::string want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa) && isa_supported(isa)) return isa;
        }
    }
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}
} // namespace

Isa active_isa() {
    static const Isa isa = detect();
    return isa;
}

void cgemm_accumulate(Isa isa, std::size_t n, const double* a, const double* b, double* c) {
    if (!isa_supported(isa)) throw DomainError("cgemm_accumulate: ISA not supported on this CPU");
    switch (isa) {
    case Isa::avx2: detail::cgemm_avx2(n, a, b, c); return;
    case Isa::neon: detail::cgemm_neon(n, a, b, c); return;
    case Isa::scalar: break;
    }
    detail::cgemm_scalar(n, a, b, c);
}

void horner_compensated(Isa isa, std::span<const double> hi, std::span<const double> lo,
                        std::span<const double> x, std::span<double> out) {
    if (hi.empty() || hi.size() != lo.size() || x.size() != out.size()) {
        throw DomainError("horner_compensated: inconsistent span sizes");
    }
    if (!isa_supported(isa)) throw DomainError("horner_compensated: ISA not supported on this CPU");
    switch (isa) {
    case Isa::avx2: detail::horner_avx2(hi, lo, x, out); return;
    case Isa::neon: detail::horner_neon(hi, lo, x, out); return;
    case Isa::scalar: break;
    }
    detail::horner_scalar(hi, lo, x, out);
}

} // namespace ginibre::simd
