#pragma once

// Exact-coefficient polynomial families: monic Laguerre and the p_n^{(M)}
// polynomials that pair with them.

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <vector>

namespace ginibre {

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(int n);
BigInt power(const BigInt& base, int exponent);

class MonicPolynomial {
public:
    explicit MonicPolynomial(std::vector<BigInt> coefficients);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// c_0 .. c_degree, c_degree == 1.
    const std::vector<BigInt>& coefficients() const { return coeffs_; }

    /// Compensated Horner on the double-double split of the exact
    /// coefficients. Throws DomainError if a coefficient overflows double.
    double operator()(double x) const;
    void evaluate(std::span<const double> x, std::span<double> out) const;

    std::string to_string(const char* var = "x") const;

private:
    void require_finite() const;

    std::vector<BigInt> coeffs_;
    std::vector<double> hi_, lo_;
    bool finite_ = true;
};

/// L~_n(x) = sum_k (-1)^{n-k} (n!/k!)^2/(n-k)! x^k, n <= 60.
MonicPolynomial monic_laguerre(int n);

/// p_n^{(M)}(x) = sum_k (-1)^{n-k} (n!/k!)^{M+1}/(n-k)! x^k, n <= 60, M <= 8.
MonicPolynomial p_polynomial(int n, int M);

/// L~_l(x)/l! for l = 0..count-1 via the three-term recurrence. These are
/// the classical Laguerre polynomials up to sign and stay O(1) on the
/// oscillatory region, so this is the path used for large l.
std::vector<double> scaled_laguerre_values(int count, double x);

} // namespace ginibre
