#pragma once

// Finite-N spectral density of squared singular values, exact moments, the
// first-moment rescaling and the large-N limit laws.

#include "ginibre/kernels.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <vector>

namespace ginibre {

using Rational = boost::multiprecision::cpp_rational;

/// R1(s) = H01(s, s); integrates to N.
double density_r1(const EnsembleParams& params, double s, const QuadratureConfig& cfg = {});

/// R1 from the triple sum over G^{M,0}_{0,M}(j,...,j,i+j | s). Independent of
/// the chi transforms; used for cross-checking only.
double density_r1_triple_sum(const EnsembleParams& params, double s, const QuadratureConfig& cfg = {});

/// E[s^k] as an exact rational; k <= 20, N <= 12.
Rational moment_exact(const EnsembleParams& params, int k);
/// E[s^k] from the triple sum of factorials that integrating the triple-sum
/// density term by term gives. Exact, independent of moment_exact.
Rational moment_exact_triple_sum(const EnsembleParams& params, int k);
double moment_closed(const EnsembleParams& params, int k);

struct MomentEstimate {
    double value = 0.0;
    double abs_error = 0.0;
};
/// (1/N) int_0^inf s^k R1(s) ds by adaptive quadrature in log s.
MomentEstimate moment_numeric(const EnsembleParams& params, int k, const QuadratureConfig& cfg = {});

/// N^{M-1} R1(N^M x): unit norm, unit first moment.
double rescaled_density(const EnsembleParams& params, double x, const QuadratureConfig& cfg = {});

/// Right end of the limiting support, (M+1)^{M+1}/M^M.
double limit_support_upper(int M);

double mp_density(double x);

/// Default distance from the cut. It is applied as eps * min(1, x) so the
/// evaluation point stays close to the cut relative to x near the origin.
inline constexpr double kResolventEps = 1e-8;

/// Limit law for M = 2 from the closed-form cubic root.
double limit_density_m2(double x, double eps = kResolventEps);

/// Limit law for 1 <= M <= 6 from the roots of (zG)^{M+1} = z(zG - 1).
double limit_density_general(int M, double x, double eps = kResolventEps);

/// int_0^S x^power rho(x) dx over the limiting support [0, S], with
/// substitutions that remove the x^{-M/(M+1)} singularity at 0 and the
/// square-root edge at S.
double integrate_limit_law(const std::function<double(double)>& rho, int M, int power);

struct DensityCurve {
    EnsembleParams params;
    std::vector<double> grid;
    std::vector<double> values;
    bool rescaled = false;
    double first_moment_used = 1.0; // N^M when rescaled
};

/// Evaluates R1 (or the rescaled density) on a grid. Points are split
/// across `workers` threads; results do not depend on the split.
DensityCurve density_curve(const EnsembleParams& params, std::vector<double> grid, bool rescaled,
                           const QuadratureConfig& cfg = {}, unsigned workers = 1);

} // namespace ginibre
