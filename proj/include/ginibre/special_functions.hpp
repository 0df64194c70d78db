#pragma once

// Gamma functions, Meijer G-functions by Mellin-Barnes quadrature, and the
// independent oracles (Bessel K integral, nested exponential integrals) used
// to cross-check them.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ginibre {

/// Tolerances and contour geometry for Mellin-Barnes and nested quadrature.
/// contour_offset and truncation_height are chosen per evaluation unless set.
/// abs_tol is measured in units of the integrand's peak modulus on the
/// contour, so it stays meaningful for G-values spanning many decades.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::optional<double> contour_offset;
    std::optional<double> truncation_height;
    int max_subdivisions = 20;

    void validate() const;
};

/// Index data of G^{m,n}_{p,q}(a; b | z); p = a.size(), q = b.size().
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }

    /// G^{m,0}_{0,m}(b_1..b_m | z).
    static MeijerGSpec pure(std::vector<double> b);
    /// G^{M,1}_{1,M+1}(-j; 0,...,0 | z), the compact form of chi_j.
    static MeijerGSpec chi_form(int j, int M);
    /// G^{M+2,1}_{2,M+2}(0,1; 0,0,j+1,...,j+1,i+j+1 | z) from the ergodic
    /// mutual information sum.
    static MeijerGSpec mutual_information_form(int i, int j, int M);
    /// All parameters shifted by k; z^k G(spec|z) = G(shifted(k)|z).
    MeijerGSpec shifted(double k) const;

    /// Throws DomainError unless m <= q, n <= p and the contour integral
    /// converges absolutely (m + n > (p + q) / 2).
    void validate() const;
    std::string to_string() const;
};

/// Diagnostics of a single Mellin-Barnes evaluation.
struct MeijerGResult {
    double value = 0.0;
    double abs_error = 0.0;
    /// (1/2pi) times the integral of Im f over the full line; zero up to
    /// rounding for real z and real parameters. NaN unless full_line was set.
    double imag_residual = 0.0;
    double contour_offset = 0.0;
    double truncation_height = 0.0;
    int evaluations = 0;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Principal-branch-free ln Gamma(w): the real part is ln|Gamma(w)| and the
/// imaginary part is correct modulo 2 pi, which is all that exp() needs.
std::complex<double> log_gamma(std::complex<double> w);

/// G-function by quadrature along the vertical line Re u = c.
double meijer_g(const MeijerGSpec& spec, double z, const QuadratureConfig& cfg = {});

/// As meijer_g, returning diagnostics. With full_line the integrand is
/// integrated over [-T, T] instead of folding by conjugate symmetry, and the
/// cancellation of the imaginary part is measured.
MeijerGResult meijer_g_detailed(const MeijerGSpec& spec, double z, const QuadratureConfig& cfg = {},
                                bool full_line = false);

/// prod_j Gamma(b_j + n): the closed-form value of
/// int_0^inf t^{n-1} G^{m,0}_{0,m}(b | t) dt.
double meijer_g_moment(std::span<const double> b, int n_exponent);

/// G^{m,0}_{0,m}(0,...,0,b | z) from the (m-1)-fold nested integral of
/// exponentials, independent of the Mellin-Barnes path. 2 <= m <= 4.
double nested_integral_oracle(int m, double b, double z, const QuadratureConfig& cfg = {});

/// K_nu(x) from int_0^inf exp(-x cosh t) cosh(nu t) dt.
double bessel_k_integral(double nu, double x, const QuadratureConfig& cfg = {});

} // namespace ginibre
