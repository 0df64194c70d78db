#include "ginibre/kernels.hpp"

#include "ginibre/compensated.hpp"
#include "ginibre/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <string>

namespace ginibre {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + ": arguments must be positive");
}

void require_exact_envelope(const EnsembleParams& p, const char* what) {
    if (p.N > kMaxExactN || p.M > kMaxExactM) {
        throw DomainError(std::string(what) + ": (N, M) outside the double-precision envelope N <= " +
                          std::to_string(kMaxExactN) + ", M <= " + std::to_string(kMaxExactM));
    }
}

// p_j^{(M)} and 1/h_j for the whole evaluation envelope, built once.
struct PolynomialTable {
    std::vector<std::vector<MonicPolynomial>> p; // [M][j]
    std::array<std::array<double, kMaxExactN>, kMaxExactM + 1> inv_norm{};

    PolynomialTable() {
        p.resize(kMaxExactM + 1);
        for (int M = 1; M <= kMaxExactM; ++M) {
            for (int j = 0; j < kMaxExactN; ++j) {
                p[M].push_back(p_polynomial(j, M));
                inv_norm[M][j] = 1.0 / squared_norm(j, M).convert_to<double>();
            }
        }
    }
};

const PolynomialTable& table() {
    static const PolynomialTable t;
    return t;
}

SignedLog log_det(const Eigen::MatrixXd& a) {
    SignedLog r;
    if (a.rows() == 0) {
        r.sign = 1.0;
        r.log_abs = 0.0;
        return r;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd& m = lu.matrixLU();
    double sign = lu.permutationP().determinant();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double d = m(i, i);
        if (d == 0.0 || !std::isfinite(d)) return SignedLog{};
        if (d < 0) sign = -sign;
        acc += std::log(std::abs(d));
    }
    r.sign = sign;
    r.log_abs = acc;
    return r;
}

bool has_coincident(std::span<const double> v) {
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
            if (v[a] == v[b]) return true;
    return false;
}

double h11_from_chi(const EnsembleParams& params, double t, double s, std::span<const double> chi_s,
                    const QuadratureConfig& cfg) {
    const std::vector<double> u = scaled_laguerre_values(params.N, t);
    compensated::Accumulator acc;
    double inv_fact = 1.0;
    for (int l = 0; l < params.N; ++l) {
        if (l > 0) inv_fact /= l;
        acc.add_product(t * u[static_cast<std::size_t>(l)] * inv_fact, chi_s[static_cast<std::size_t>(l)]);
    }
    const double sub = params.M == 2
                           ? std::exp(-s / t)
                           : meijer_g(MeijerGSpec::pure(std::vector<double>(params.M - 1, 0.0)), s / t, cfg);
    acc.add(-sub);
    return acc.value();
}

double h10_value(int N, double ti, double tj) {
    const std::vector<double> ui = scaled_laguerre_values(N, ti);
    const std::vector<double> uj = scaled_laguerre_values(N, tj);
    return (ti / tj) * std::exp(-tj) * compensated::dot(ui, uj);
}

double k_value(const EnsembleParams& params, std::span<const double> p_scaled, double t) {
    const auto& tab = table();
    compensated::Accumulator acc;
    for (int j = 0; j < params.N; ++j) acc.add_product(p_scaled[static_cast<std::size_t>(j)], tab.p[1][j](t));
    return acc.value();
}

} // namespace

void EnsembleParams::validate(bool two_matrix) const {
    if (N < 1) throw DomainError("EnsembleParams: N must be >= 1");
    if (M < 1) throw DomainError("EnsembleParams: M must be >= 1");
    if (two_matrix && M < 2) throw DomainError("EnsembleParams: two-matrix quantities need M >= 2");
}

BigInt bimoment(int i, int j, int M) {
    if (i < 0 || j < 0 || i > 60 || j > 60 || M < 1) throw DomainError("bimoment: indices out of range");
    return factorial(i + j) * power(factorial(i), M - 1);
}

BigInt squared_norm(int n, int M) {
    if (n < 0 || n > 60 || M < 1) throw DomainError("squared_norm: indices out of range");
    return power(factorial(n), M + 1);
}

double normalization_constant(const EnsembleParams& params) {
    params.validate();
    if (params.N > kMaxExactN) throw DomainError("normalization_constant: N must be <= 12");
    double acc = std::lgamma(params.N + 1.0);
    for (int a = 1; a <= params.N; ++a) acc += (params.M + 1) * log_gamma(static_cast<double>(a));
    return -acc;
}

double andreief_normalization(const EnsembleParams& params) {
    params.validate();
    const int N = params.N;
    Eigen::MatrixXd m(N, N);
    std::vector<double> b(static_cast<std::size_t>(params.M), 0.0);
    for (int d = 1; d <= N; ++d) {
        b.back() = d - 1.0;
        for (int c = 1; c <= N; ++c) m(c - 1, d - 1) = meijer_g_moment(b, c);
    }
    const SignedLog det = log_det(m);
    return det.sign * std::exp(normalization_constant(params) + std::lgamma(N + 1.0) + det.log_abs);
}

double weight_w(int M, double s, double t, const QuadratureConfig& cfg) {
    if (M < 2) throw DomainError("weight_w: M must be >= 2");
    require_positive(s, "weight_w");
    require_positive(t, "weight_w");
    if (M == 2) return std::exp(-t - s / t) / t;
    return std::exp(-t) / t * meijer_g(MeijerGSpec::pure(std::vector<double>(M - 1, 0.0)), s / t, cfg);
}

double chi_contour(int j, int M, double s, const QuadratureConfig& cfg) {
    if (j < 0 || M < 1) throw DomainError("chi_contour: j >= 0 and M >= 1 required");
    require_positive(s, "chi_contour");
    const double g = meijer_g(MeijerGSpec::chi_form(j, M), s, cfg);
    return (j % 2 == 0) ? g : -g;
}

namespace {

// Finite-sum chi_j together with its cancellation factor
// sum_i |c_ji G_i| / |chi_j|.
void chi_finite_sum_impl(int count, int M, double s, const QuadratureConfig& cfg, std::vector<double>& value,
                         std::vector<double>& condition) {
    value.assign(static_cast<std::size_t>(count), 0.0);
    condition.assign(static_cast<std::size_t>(count), 1.0);
    std::vector<double> g(static_cast<std::size_t>(count));
    std::vector<double> b(static_cast<std::size_t>(M), 0.0);
    for (int i = 0; i < count; ++i) {
        b.back() = i;
        g[static_cast<std::size_t>(i)] = meijer_g(MeijerGSpec::pure(b), s, cfg);
    }
    for (int j = 0; j < count; ++j) {
        // (j!/i!)^2/(j-i)! is an integer below 2^53 for j <= 11
        compensated::Accumulator acc;
        double magnitude = 0.0;
        const BigInt jf = factorial(j);
        for (int i = 0; i <= j; ++i) {
            const BigInt r = jf / factorial(i);
            double c = (r * r / factorial(j - i)).convert_to<double>();
            if ((j - i) % 2 == 1) c = -c;
            acc.add_product(c, g[static_cast<std::size_t>(i)]);
            magnitude += std::abs(c * g[static_cast<std::size_t>(i)]);
        }
        value[static_cast<std::size_t>(j)] = acc.value();
        condition[static_cast<std::size_t>(j)] = magnitude / std::abs(acc.value());
    }
}

} // namespace

std::vector<double> chi_finite_sum(int count, int M, double s, const QuadratureConfig& cfg) {
    if (count < 0 || count > kMaxExactN || M < 2) {
        throw DomainError("chi_finite_sum: need 0 <= count <= 12 and M >= 2");
    }
    require_positive(s, "chi_finite_sum");
    std::vector<double> value, condition;
    chi_finite_sum_impl(count, M, s, cfg, value, condition);
    return value;
}

std::vector<double> chi_values(int count, int M, double s, const QuadratureConfig& cfg) {
    if (count < 0 || M < 1) throw DomainError("chi_values: count >= 0 and M >= 1 required");
    require_positive(s, "chi_values");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (M == 1) {
        // L~_j e^{-s} = j! u_j e^{-s}
        const std::vector<double> u = scaled_laguerre_values(count, s);
        double fact = 1.0;
        for (int j = 0; j < count; ++j) {
            if (j > 0) fact *= j;
            out[static_cast<std::size_t>(j)] = fact * u[static_cast<std::size_t>(j)] * std::exp(-s);
        }
        return out;
    }
    const int exact = std::min(count, kMaxExactN);
    std::vector<double> value, condition;
    chi_finite_sum_impl(exact, M, s, cfg, value, condition);
    for (int j = 0; j < exact; ++j) {
        const auto k = static_cast<std::size_t>(j);
        out[k] = condition[k] > kChiCancellationLimit ? chi_contour(j, M, s, cfg) : value[k];
    }
    for (int j = exact; j < count; ++j) out[static_cast<std::size_t>(j)] = chi_contour(j, M, s, cfg);
    return out;
}

double chi(int j, int M, double s, const QuadratureConfig& cfg) {
    if (j < 0) throw DomainError("chi: j must be >= 0");
    if (j >= kMaxExactN && M >= 2) return chi_contour(j, M, s, cfg);
    return chi_values(j + 1, M, s, cfg).back();
}

double psi(int l, int M, double t) {
    if (l < 0 || M < 1) throw DomainError("psi: l >= 0 and M >= 1 required");
    require_positive(t, "psi");
    // (l!)^{M-1} t L~_l(t) = (l!)^M t u_l(t)
    const double u = scaled_laguerre_values(l + 1, t).back();
    return std::exp(M * std::lgamma(l + 1.0)) * t * u;
}

std::vector<double> scaled_p_values(const EnsembleParams& params, double s) {
    params.validate();
    require_exact_envelope(params, "scaled_p_values");
    const auto& tab = table();
    std::vector<double> out(static_cast<std::size_t>(params.N));
    for (int j = 0; j < params.N; ++j) out[static_cast<std::size_t>(j)] = tab.p[params.M][j](s) * tab.inv_norm[params.M][j];
    return out;
}

double kernel_K(const EnsembleParams& params, double s, double t) {
    require_positive(s, "kernel_K");
    require_positive(t, "kernel_K");
    return k_value(params, scaled_p_values(params, s), t);
}

double kernel_H01(const EnsembleParams& params, double s_a, double s_b, const QuadratureConfig& cfg) {
    require_positive(s_a, "kernel_H01");
    require_positive(s_b, "kernel_H01");
    const std::vector<double> p = scaled_p_values(params, s_a);
    const std::vector<double> c = chi_values(params.N, params.M, s_b, cfg);
    return compensated::dot(p, c);
}

double kernel_H00(const EnsembleParams& params, double s, double t) {
    return std::exp(-t) / t * kernel_K(params, s, t);
}

double kernel_H10(const EnsembleParams& params, double t_i, double t_j) {
    params.validate();
    require_positive(t_i, "kernel_H10");
    require_positive(t_j, "kernel_H10");
    return h10_value(params.N, t_i, t_j);
}

double kernel_H11(const EnsembleParams& params, double t, double s, const QuadratureConfig& cfg) {
    params.validate(true);
    require_positive(t, "kernel_H11");
    require_positive(s, "kernel_H11");
    const std::vector<double> c = chi_values(params.N, params.M, s, cfg);
    return h11_from_chi(params, t, s, c, cfg);
}

double vandermonde(std::span<const double> values) {
    double r = 1.0;
    for (std::size_t a = 0; a < values.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) r *= values[a] - values[b];
    return r;
}

SignedLog log_vandermonde(std::span<const double> values) {
    SignedLog r;
    r.sign = 1.0;
    r.log_abs = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            const double d = values[a] - values[b];
            if (d == 0.0) return SignedLog{};
            if (d < 0) r.sign = -r.sign;
            r.log_abs += std::log(std::abs(d));
        }
    }
    return r;
}

namespace {

void check_points(const EnsembleParams& params, std::span<const double> s, const char* what) {
    params.validate();
    for (double x : s) require_positive(x, what);
    if (static_cast<int>(s.size()) > params.N) {
        throw DomainError(std::string(what) + ": more points than N");
    }
}

Eigen::MatrixXd h01_matrix(const EnsembleParams& params, std::span<const double> s, const QuadratureConfig& cfg) {
    const auto k = static_cast<Eigen::Index>(s.size());
    std::vector<std::vector<double>> p(s.size()), c(s.size());
    for (std::size_t a = 0; a < s.size(); ++a) {
        p[a] = scaled_p_values(params, s[a]);
        c[a] = chi_values(params.N, params.M, s[a], cfg);
    }
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) m(a, b) = compensated::dot(p[a], c[b]);
    return m;
}

JpdfValue kernel_route(const EnsembleParams& params, std::span<const double> s, const QuadratureConfig& cfg) {
    JpdfValue out;
    out.ill_conditioned = params.N > 10;
    if (has_coincident(s)) return out;
    out.value = log_det(h01_matrix(params, s, cfg));
    out.value.log_abs -= std::lgamma(params.N + 1.0);
    return out;
}

JpdfValue vandermonde_route(const EnsembleParams& params, std::span<const double> s,
                            const QuadratureConfig& cfg) {
    JpdfValue out;
    out.ill_conditioned = params.N > 10;
    const SignedLog vdm = log_vandermonde(s);
    if (vdm.sign == 0.0) return out;
    const int N = params.N;
    Eigen::MatrixXd g(N, N);
    std::vector<double> b(static_cast<std::size_t>(params.M), 0.0);
    for (int d = 0; d < N; ++d) {
        b.back() = d;
        const MeijerGSpec spec = MeijerGSpec::pure(b);
        for (int c = 0; c < N; ++c) g(c, d) = meijer_g(spec, s[static_cast<std::size_t>(c)], cfg);
    }
    const SignedLog det = log_det(g);
    if (det.sign == 0.0) return out;
    out.value.sign = vdm.sign * det.sign;
    out.value.log_abs = normalization_constant(params) + vdm.log_abs + det.log_abs;
    return out;
}

void check_jpdf_points(const EnsembleParams& params, std::span<const double> s) {
    check_points(params, s, "jpdf_eval");
    if (static_cast<int>(s.size()) != params.N) throw DomainError("jpdf_eval: need exactly N points");
}

} // namespace

JpdfValue jpdf_eval(const EnsembleParams& params, std::span<const double> s, const QuadratureConfig& cfg) {
    check_jpdf_points(params, s);
    require_exact_envelope(params, "jpdf_eval");
    return kernel_route(params, s, cfg);
}

JpdfCrossCheck jpdf_cross_check(const EnsembleParams& params, std::span<const double> s,
                                const QuadratureConfig& cfg) {
    check_jpdf_points(params, s);
    require_exact_envelope(params, "jpdf_eval");
    JpdfCrossCheck r;
    r.kernel_route = kernel_route(params, s, cfg);
    r.vandermonde_route = vandermonde_route(params, s, cfg);
    const SignedLog& x = r.kernel_route.value;
    const SignedLog& y = r.vandermonde_route.value;
    if (x.sign == 0.0 && y.sign == 0.0) {
        r.rel_diff = 0.0;
    } else if (x.sign != y.sign) {
        r.rel_diff = std::numeric_limits<double>::infinity();
    } else {
        r.rel_diff = std::abs(std::expm1(x.log_abs - y.log_abs));
    }
    return r;
}

double correlation_rk(const EnsembleParams& params, std::span<const double> s, const QuadratureConfig& cfg) {
    check_points(params, s, "correlation_rk");
    require_exact_envelope(params, "correlation_rk");
    if (has_coincident(s)) return 0.0;
    return log_det(h01_matrix(params, s, cfg)).value();
}

double correlation_rkl(const CorrelationRequest& request, const QuadratureConfig& cfg) {
    const EnsembleParams& params = request.params;
    const auto& s = request.s_points;
    const auto& t = request.t_points;
    check_points(params, s, "correlation_rkl");
    check_points(params, t, "correlation_rkl");
    if (t.empty()) return correlation_rk(params, s, cfg);
    params.validate(true);
    require_exact_envelope(params, "correlation_rkl");
    if (has_coincident(s) || has_coincident(t)) return 0.0;

    const auto k = static_cast<Eigen::Index>(s.size());
    const auto l = static_cast<Eigen::Index>(t.size());
    std::vector<std::vector<double>> p(s.size()), c(s.size());
    for (std::size_t a = 0; a < s.size(); ++a) {
        p[a] = scaled_p_values(params, s[a]);
        c[a] = chi_values(params.N, params.M, s[a], cfg);
    }
    Eigen::MatrixXd m(k + l, k + l);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) m(a, b) = compensated::dot(p[a], c[b]);
        for (Eigen::Index j = 0; j < l; ++j) {
            const double tj = t[static_cast<std::size_t>(j)];
            m(a, k + j) = std::exp(-tj) / tj * k_value(params, p[a], tj);
        }
    }
    for (Eigen::Index i = 0; i < l; ++i) {
        const double ti = t[static_cast<std::size_t>(i)];
        for (Eigen::Index b = 0; b < k; ++b) m(k + i, b) = h11_from_chi(params, ti, s[b], c[b], cfg);
        for (Eigen::Index j = 0; j < l; ++j) m(k + i, k + j) = h10_value(params.N, ti, t[static_cast<std::size_t>(j)]);
    }
    return log_det(m).value();
}

} // namespace ginibre
