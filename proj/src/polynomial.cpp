#include "ginibre/polynomial.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/simd.hpp"

#include <cmath>
#include <sstream>

namespace ginibre {

BigInt factorial(int n) {
    if (n < 0) throw DomainError("factorial: negative argument");
    BigInt r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

BigInt power(const BigInt& base, int exponent) {
    if (exponent < 0) throw DomainError("power: negative exponent");
    return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

MonicPolynomial::MonicPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty() || coeffs_.back() != 1) {
        throw DomainError("MonicPolynomial: leading coefficient must be exactly 1");
    }
    hi_.reserve(coeffs_.size());
    lo_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        const double h = c.convert_to<double>();
        if (!std::isfinite(h)) {
            finite_ = false;
            hi_.push_back(h);
            lo_.push_back(0.0);
            continue;
        }
        const BigInt rest = c - BigInt(h);
        hi_.push_back(h);
        lo_.push_back(rest.convert_to<double>());
    }
}

void MonicPolynomial::require_finite() const {
    if (!finite_) throw DomainError("MonicPolynomial: coefficients exceed double range");
}

double MonicPolynomial::operator()(double x) const {
    require_finite();
    double out = 0.0;
    simd::detail::horner_scalar(hi_, lo_, std::span<const double>(&x, 1), std::span<double>(&out, 1));
    return out;
}

void MonicPolynomial::evaluate(std::span<const double> x, std::span<double> out) const {
    require_finite();
    simd::horner_compensated(hi_, lo_, x, out);
}

std::string MonicPolynomial::to_string(const char* var) const {
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const BigInt& c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        const bool neg = c < 0;
        const BigInt mag = neg ? BigInt(-c) : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        if (mag != 1 || k == 0) os << mag;
        if (k >= 1) os << var;
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

MonicPolynomial p_polynomial(int n, int M) {
    if (n < 0 || n > 60) throw DomainError("p_polynomial: degree must be in [0, 60]");
    if (M < 1 || M > 8) throw DomainError("p_polynomial: M must be in [1, 8]");
    std::vector<BigInt> c(static_cast<std::size_t>(n) + 1);
    const BigInt nf = factorial(n);
    for (int k = 0; k <= n; ++k) {
        BigInt v = power(nf / factorial(k), M + 1) / factorial(n - k);
        if ((n - k) % 2 == 1) v = -v;
        c[static_cast<std::size_t>(k)] = std::move(v);
    }
    return MonicPolynomial(std::move(c));
}

MonicPolynomial monic_laguerre(int n) {
    if (n < 0 || n > 60) throw DomainError("monic_laguerre: degree must be in [0, 60]");
    return p_polynomial(n, 1);
}

std::vector<double> scaled_laguerre_values(int count, double x) {
    std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
    if (count <= 0) return v;
    v[0] = 1.0;
    if (count > 1) v[1] = x - 1.0;
    // (n+1) u_{n+1} = (x - 2n - 1) u_n - n u_{n-1},  u_n = L~_n / n!
    for (int n = 1; n + 1 < count; ++n) {
        v[static_cast<std::size_t>(n) + 1] =
            ((x - 2.0 * n - 1.0) * v[static_cast<std::size_t>(n)] - n * v[static_cast<std::size_t>(n) - 1]) /
            (n + 1.0);
    }
    return v;
}

} // namespace ginibre
