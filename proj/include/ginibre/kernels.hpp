#pragma once

// Biorthogonal system of the product ensemble: bimoments, norms, the
// transforms chi and psi, the four correlation kernels, the joint density and
// k-point / (k,l)-point correlation determinants.

#include "ginibre/polynomial.hpp"
#include "ginibre/special_functions.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace ginibre {

struct EnsembleParams {
    int N = 1; // matrix dimension
    int M = 1; // number of factors

    /// N >= 1, M >= 1; with two_matrix also M >= 2.
    void validate(bool two_matrix = false) const;
};

/// Polynomial evaluation uses exact coefficients in double precision; past
/// these bounds the cancellation in the alternating sums is no longer
/// controlled.
inline constexpr int kMaxExactN = 12;
inline constexpr int kMaxExactM = 6;

BigInt bimoment(int i, int j, int M);
BigInt squared_norm(int n, int M);

/// ln C_N = -ln(N! prod_{a=1}^N Gamma(a)^{M+1}).
double normalization_constant(const EnsembleParams& params);

/// Integral of the joint density, reduced by the Andreief identity to
/// C_N N! det[Gamma(c+d-1) Gamma(c)^{M-1}]_{c,d=1..N}. Equals 1.
double andreief_normalization(const EnsembleParams& params);

/// t^{-1} e^{-t} G^{M-1,0}_{0,M-1}(0,...,0 | s/t), M >= 2.
double weight_w(int M, double s, double t, const QuadratureConfig& cfg = {});

/// Cancellation factor of the chi finite sum above which the single-G form
/// is used instead.
inline constexpr double kChiCancellationLimit = 100.0;

/// chi_j^{(M)}(s) for j = 0..count-1. For M = 1 this is L~_j(s) e^{-s}.
/// For M >= 2 the finite sum over G^{M,0}_{0,M}(0,..,0,i | s) is used, with
/// each G evaluated once. Indices past kMaxExactN - 1, and terms whose sum
/// cancels more than kChiCancellationLimit, use the single-G form
/// (-1)^j G^{M,1}_{1,M+1}(-j; 0,...,0 | s).
std::vector<double> chi_values(int count, int M, double s, const QuadratureConfig& cfg = {});
/// The plain finite sum, count <= 12, M >= 2.
std::vector<double> chi_finite_sum(int count, int M, double s, const QuadratureConfig& cfg = {});
double chi(int j, int M, double s, const QuadratureConfig& cfg = {});
/// (-1)^j G^{M,1}_{1,M+1}(-j; 0,...,0 | s).
double chi_contour(int j, int M, double s, const QuadratureConfig& cfg = {});

/// (l!)^{M-1} t L~_l(t).
double psi(int l, int M, double t);

double kernel_K(const EnsembleParams& params, double s, double t);
double kernel_H01(const EnsembleParams& params, double s_a, double s_b, const QuadratureConfig& cfg = {});
double kernel_H00(const EnsembleParams& params, double s, double t);
double kernel_H10(const EnsembleParams& params, double t_i, double t_j);
double kernel_H11(const EnsembleParams& params, double t, double s, const QuadratureConfig& cfg = {});

/// Value of p_j(s)/h_j for j = 0..N-1.
std::vector<double> scaled_p_values(const EnsembleParams& params, double s);

/// Signed log-magnitude, so that determinants far below DBL_MIN survive.
struct SignedLog {
    double sign = 0.0; // -1, 0 or +1
    double log_abs = -std::numeric_limits<double>::infinity();

    double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Joint density of all N squared singular values.
struct JpdfValue {
    SignedLog value;
    /// Determinant conditioning degrades quickly past N = 10.
    bool ill_conditioned = false;
};

JpdfValue jpdf_eval(const EnsembleParams& params, std::span<const double> s,
                    const QuadratureConfig& cfg = {});

/// Both routes: (1/N!) det[H01(s_a, s_b)] and C_N Delta(s) det[G(0,..,0,d-1|s_c)].
struct JpdfCrossCheck {
    JpdfValue kernel_route;
    JpdfValue vandermonde_route;
    double rel_diff = 0.0;
};
JpdfCrossCheck jpdf_cross_check(const EnsembleParams& params, std::span<const double> s,
                                const QuadratureConfig& cfg = {});

double correlation_rk(const EnsembleParams& params, std::span<const double> s,
                      const QuadratureConfig& cfg = {});

struct CorrelationRequest {
    EnsembleParams params;
    std::vector<double> s_points;
    std::vector<double> t_points;
};
double correlation_rkl(const CorrelationRequest& request, const QuadratureConfig& cfg = {});

double vandermonde(std::span<const double> values);
SignedLog log_vandermonde(std::span<const double> values);

} // namespace ginibre
