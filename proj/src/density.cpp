#include "ginibre/density.hpp"

#include "ginibre/compensated.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <numbers>
#include <thread>

namespace ginibre {

namespace {

constexpr double pi = std::numbers::pi;

void require_moment_range(const EnsembleParams& params, int k) {
    params.validate();
    if (k < 0 || k > 20) throw DomainError("moment: k must be in [0, 20]");
    if (params.N > kMaxExactN) throw DomainError("moment: N must be <= 12");
}

BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

} // namespace

double density_r1(const EnsembleParams& params, double s, const QuadratureConfig& cfg) {
    if (!(s > 0.0)) throw DomainError("density_r1: s must be positive");
    return kernel_H01(params, s, s, cfg);
}

double density_r1_triple_sum(const EnsembleParams& params, double s, const QuadratureConfig& cfg) {
    params.validate();
    if (params.N > kMaxExactN || params.M > kMaxExactM) throw DomainError("density_r1_triple_sum: outside envelope");
    if (!(s > 0.0)) throw DomainError("density_r1_triple_sum: s must be positive");
    const int N = params.N, M = params.M;
    // G(j,..,j,i+j | s) depends only on (i, j); gather coefficients first.
    std::vector<std::vector<Rational>> c(static_cast<std::size_t>(N), std::vector<Rational>(static_cast<std::size_t>(N)));
    for (int l = 0; l < N; ++l) {
        const BigInt lf2 = factorial(l) * factorial(l);
        for (int i = 0; i <= l; ++i) {
            for (int j = 0; j <= l; ++j) {
                Rational t(lf2, factorial(l - j) * factorial(l - i) * factorial(i) * factorial(i) *
                                    power(factorial(j), M + 1));
                if ((i + j) % 2 == 1) t = -t;
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += t;
            }
        }
    }
    compensated::Accumulator acc;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const Rational& r = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (r == 0) continue;
            std::vector<double> b(static_cast<std::size_t>(M), static_cast<double>(j));
            b.back() = i + j;
            acc.add_product(r.convert_to<double>(), meijer_g(MeijerGSpec::pure(b), s, cfg));
        }
    }
    return acc.value();
}

Rational moment_exact(const EnsembleParams& params, int k) {
    require_moment_range(params, k);
    if (k == 0) return 1;
    const int N = params.N;
    Rational sum = 0;
    for (int l = 0; l < N; ++l) {
        const BigInt b = binomial(k - 1, N - l - 1);
        if (b == 0) continue;
        BigInt term = power(factorial(k + l) / factorial(l), params.M + 1) * b;
        if ((N - l - 1) % 2 == 1) term = -term;
        sum += Rational(term);
    }
    return sum / Rational(factorial(k) * N);
}

Rational moment_exact_triple_sum(const EnsembleParams& params, int k) {
    require_moment_range(params, k);
    const int N = params.N, M = params.M;
    Rational sum = 0;
    for (int l = 0; l < N; ++l) {
        for (int i = 0; i <= l; ++i) {
            for (int j = 0; j <= l; ++j) {
                Rational t(factorial(l) * factorial(l) * factorial(i + j + k) * power(factorial(j + k), M - 1),
                           factorial(l - j) * factorial(l - i) * factorial(i) * factorial(i) *
                               power(factorial(j), M + 1));
                sum += ((i + j) % 2 == 1) ? Rational(-t) : t;
            }
        }
    }
    return sum / N;
}

double moment_closed(const EnsembleParams& params, int k) { return moment_exact(params, k).convert_to<double>(); }

MomentEstimate moment_numeric(const EnsembleParams& params, int k, const QuadratureConfig& cfg) {
    params.validate();
    if (k < 0) throw DomainError("moment_numeric: k must be >= 0");
    const double scale = std::pow(static_cast<double>(params.N), params.M);
    auto f = [&](double s) { return std::pow(s, k) * density_r1(params, s, cfg) / params.N; };
    quad::Tolerance tol{std::max(cfg.rel_tol, 1e-12), 1e-300, cfg.max_subdivisions, 4000};
    const quad::Result r = quad::integrate_half_line(f, 1e-14 * scale, 50.0 * scale, tol);
    if (!r.converged) throw NumericalError("moment_numeric: quadrature did not converge", r.abs_error);
    return {r.value, r.abs_error};
}

double rescaled_density(const EnsembleParams& params, double x, const QuadratureConfig& cfg) {
    params.validate();
    if (!(x > 0.0)) throw DomainError("rescaled_density: x must be positive");
    const double F = std::pow(static_cast<double>(params.N), params.M);
    return F / params.N * density_r1(params, F * x, cfg);
}

double limit_support_upper(int M) {
    if (M < 1) throw DomainError("limit_support_upper: M must be >= 1");
    return std::pow(M + 1.0, M + 1) / std::pow(static_cast<double>(M), M);
}

double mp_density(double x) {
    if (!(x > 0.0)) throw DomainError("mp_density: x must be positive");
    if (x >= 4.0) return 0.0;
    return std::sqrt((4.0 - x) / x) / (2.0 * pi);
}

double limit_density_m2(double x, double eps) {
    if (!(eps > 0.0)) throw DomainError("limit_density_m2: eps must be positive");
    if (!(x > 0.0)) throw DomainError("limit_density_m2: x must be positive");
    using cplx = std::complex<double>;
    // With principal branches the closed form returns, on the upper side of
    // the cut, the complex-conjugate root. Evaluated just below the cut it
    // returns the physical G(x + i eps) to O(eps).
    const cplx z(x, -eps * std::min(1.0, x));
    const cplx r = std::sqrt(27.0 / (4.0 * z));
    const cplx q = std::sqrt(27.0 / (4.0 * z) - 1.0);
    const cplx g = (std::pow(-(q + r), 1.0 / 3.0) + std::pow(q - r, 1.0 / 3.0)) / std::sqrt(3.0 * z);
    return std::max(0.0, -g.imag() / pi);
}

double limit_density_general(int M, double x, double eps) {
    if (M < 1 || M > 6) throw DomainError("limit_density_general: M must be in [1, 6]");
    if (!(eps > 0.0)) throw DomainError("limit_density_general: eps must be positive");
    if (!(x > 0.0)) throw DomainError("limit_density_general: x must be positive");
    // beyond the right edge only the O(eps) tail of the regularized resolvent is left
    if (x > limit_support_upper(M)) return 0.0;
    using cplx = std::complex<double>;
    const cplx z(x, eps * std::min(1.0, x));
    // w = zG solves w^{M+1} - z w + z = 0. Companion matrix of the monic
    // polynomial with coefficients c_0..c_M. Near the origin the roots shrink
    // like |z|^{1/(M+1)}, below the eigensolver's deflation threshold, so the
    // companion matrix is built for u = w / lambda.
    const int d = M + 1;
    std::vector<cplx> c(static_cast<std::size_t>(d), 0.0);
    c[0] = z;
    c[1] = -z;
    const double lambda = std::min(1.0, std::pow(std::abs(z), 1.0 / d));
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
        comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / std::pow(lambda, d - i);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("limit_density_general: companion eigenvalues failed", 0.0);
    }
    auto poly = [&](cplx w, cplx& deriv) {
        cplx p = 1.0, dp = 0.0;
        for (int i = d - 1; i >= 0; --i) {
            dp = dp * w + p;
            p = p * w + c[static_cast<std::size_t>(i)];
        }
        deriv = dp;
        return p;
    };
    const cplx target = 1.0 / z;
    bool found = false;
    cplx best;
    for (Eigen::Index i = 0; i < d; ++i) {
        cplx w = lambda * es.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            cplx dp;
            const cplx p = poly(w, dp);
            if (dp == cplx(0.0)) break;
            w -= p / dp;
        }
        const cplx g = w / z;
        if (!(g.imag() < 0.0)) continue;
        if (!found || std::abs(g - target) < std::abs(best - target)) {
            best = g;
            found = true;
        }
    }
    if (!found) {
        throw NumericalError("limit_density_general: no root with negative imaginary part", 0.0);
    }
    return std::max(0.0, -best.imag() / pi);
}

double integrate_limit_law(const std::function<double(double)>& rho, int M, int power) {
    const double S = limit_support_upper(M);
    const double split = 0.5 * S;
    const double a = M + 1.0;
    quad::Tolerance tol{1e-11, 1e-15, 30, 4000};
    // x = v^{M+1} on [0, split]
    auto left = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double x = std::pow(v, a);
        return std::pow(x, power) * rho(x) * a * std::pow(v, M);
    };
    // x = S - w^2 on [split, S]
    auto right = [&](double w) {
        const double x = S - w * w;
        if (w <= 0.0) return 0.0;
        return std::pow(x, power) * rho(x) * 2.0 * w;
    };
    const auto l = quad::integrate(left, 0.0, std::pow(split, 1.0 / a), tol);
    const auto r = quad::integrate(right, 0.0, std::sqrt(S - split), tol);
    return l.value + r.value;
}

DensityCurve density_curve(const EnsembleParams& params, std::vector<double> grid, bool rescaled,
                           const QuadratureConfig& cfg, unsigned workers) {
    params.validate();
    DensityCurve curve;
    curve.params = params;
    curve.grid = std::move(grid);
    curve.rescaled = rescaled;
    curve.first_moment_used = rescaled ? std::pow(static_cast<double>(params.N), params.M) : 1.0;
    curve.values.assign(curve.grid.size(), 0.0);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(curve.grid.size())));
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double x = curve.grid[i];
            curve.values[i] = rescaled ? rescaled_density(params, x, cfg) : density_r1(params, x, cfg);
        }
    };
    if (workers == 1) {
        run(0, curve.grid.size());
        return curve;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (curve.grid.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(curve.grid.size(), b + chunk);
        pool.emplace_back([&, w, b, e] {
            try {
                run(b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return curve;
}

} // namespace ginibre
