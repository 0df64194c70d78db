#include "ginibre/validation.hpp"

#include "ginibre/density.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/kernels.hpp"
#include "ginibre/montecarlo.hpp"
#include "ginibre/polynomial.hpp"
#include "ginibre/quadrature.hpp"
#include "ginibre/simd.hpp"
#include "ginibre/telecom.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

namespace ginibre::validation {

namespace {

using Clock = std::chrono::steady_clock;

double rel_err(double got, double want) {
    const double d = std::abs(got - want);
    return want == 0.0 ? d : d / std::abs(want);
}

double factorial_d(int n) { return std::tgamma(n + 1.0); }

// Accumulates the worst error of a check and where it occurred.
class Check {
public:
    Check(std::string name, double tolerance, double time_limit = 0.0)
        : start_(Clock::now()) {
        r_.name = std::move(name);
        r_.tolerance = tolerance;
        r_.time_limit = time_limit;
    }

    void record(double err, const std::string& where) {
        if (!(err <= r_.worst_error) || std::isnan(err)) {
            r_.worst_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
            worst_at_ = where;
        }
    }

    void fail(const std::string& why) {
        failed_ = true;
        note(why);
    }

    void note(const std::string& text) {
        if (!notes_.empty()) notes_ += "; ";
        notes_ += text;
    }

    // Runs body, turning library exceptions into a failure of this check.
    template <class F>
    void guard(const std::string& where, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            fail(where + ": " + e.what());
        }
    }

    CheckResult finish() {
        r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        r_.passed = !failed_ && r_.worst_error <= r_.tolerance &&
                    (r_.time_limit <= 0.0 || r_.seconds <= r_.time_limit);
        std::ostringstream os;
        if (!worst_at_.empty()) os << "worst at " << worst_at_;
        if (!notes_.empty()) os << (worst_at_.empty() ? "" : "; ") << notes_;
        if (r_.time_limit > 0.0 && r_.seconds > r_.time_limit) os << "; over time limit";
        r_.detail = os.str();
        return r_;
    }

private:
    CheckResult r_;
    Clock::time_point start_;
    std::string worst_at_;
    std::string notes_;
    bool failed_ = false;
};

std::string label(const EnsembleParams& p) {
    return "N=" + std::to_string(p.N) + " M=" + std::to_string(p.M);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

quad::Tolerance tolerance_from(const QuadratureConfig& cfg, double rel, double abs) {
    quad::Tolerance t;
    t.rel = rel;
    t.abs = abs;
    t.max_depth = std::max(cfg.max_subdivisions, 20);
    return t;
}

// Integral of R1 over [a, b], in log s so the singularity at 0 is harmless.
double bin_integral(const EnsembleParams& params, double a, double b, const QuadratureConfig& cfg) {
    const double lo = std::max(a, 1e-14);
    if (b <= lo) return 0.0;
    auto g = [&](double x) {
        const double s = std::exp(x);
        return s * density_r1(params, s, cfg);
    };
    return quad::integrate(g, std::log(lo), std::log(b), tolerance_from(cfg, 1e-9, 1e-13)).value;
}

double l1_distance(const std::function<double(double)>& f, const std::function<double(double)>& g, double a,
                   double b) {
    auto h = [&](double x) { return std::abs(f(x) - g(x)); };
    quad::Tolerance t;
    t.rel = 1e-6;
    t.abs = 1e-9;
    return quad::integrate(h, a, b, t).value;
}

std::function<double(double)> limit_law(int M) {
    if (M == 1) return mp_density;
    if (M == 2) return [](double x) { return limit_density_m2(x); };
    return [M](double x) { return limit_density_general(M, x); };
}

} // namespace

CheckResult andreief_normalization(const Options&) {
    Check c("andreief_normalization", 1e-8, 1.0);
    for (int N = 1; N <= 3; ++N)
        for (int M = 1; M <= 3; ++M) {
            const EnsembleParams p{N, M};
            c.guard(label(p), [&] { c.record(std::abs(ginibre::andreief_normalization(p) - 1.0), label(p)); });
        }
    return c.finish();
}

CheckResult density_norm(const Options& opt) {
    Check c("density_norm", 1e-6, 90.0);
    for (const EnsembleParams p : {EnsembleParams{2, 2}, EnsembleParams{4, 2}, EnsembleParams{3, 3}}) {
        const auto t0 = Clock::now();
        c.guard(label(p), [&] {
            const MomentEstimate m = moment_numeric(p, 0, opt.cfg);
            c.record(std::abs(m.value - 1.0), label(p));
        });
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        if (sec > 30.0) c.fail(label(p) + " took " + fmt(sec) + " s");
    }
    return c.finish();
}

CheckResult moments(const Options& opt) {
    Check c("moments", 1e-6);
    for (int N = 1; N <= 4; ++N)
        for (int M = 1; M <= 3; ++M) {
            const EnsembleParams p{N, M};
            c.guard(label(p), [&] {
                if (moment_exact(p, 1) != Rational(power(BigInt(N), M)))
                    c.fail(label(p) + ": first moment is not N^M");
                for (int k = 0; k <= 4; ++k) {
                    if (moment_exact(p, k) != moment_exact_triple_sum(p, k))
                        c.fail(label(p) + " k=" + std::to_string(k) + ": exact routes differ");
                    const double closed = moment_closed(p, k);
                    const MomentEstimate num = moment_numeric(p, k, opt.cfg);
                    c.record(rel_err(num.value, closed), label(p) + " k=" + std::to_string(k));
                }
            });
        }
    if (moment_exact({2, 2}, 2) != Rational(52)) c.fail("N=2 M=2 k=2 is not 52");
    return c.finish();
}

CheckResult biorthogonality(const Options& opt) {
    constexpr int n = 5;
    Check c("biorthogonality", 1e-7);
    for (int M : {2, 3}) {
        c.guard("M=" + std::to_string(M), [&] {
            std::vector<MonicPolynomial> p;
            for (int i = 0; i < n; ++i) p.push_back(p_polynomial(i, M));
            auto f = [&](double s, std::span<double> out) {
                const auto x = chi_values(n, M, s, opt.cfg);
                for (int i = 0; i < n; ++i) {
                    const double pi = p[i](s);
                    for (int j = 0; j < n; ++j) out[i * n + j] = pi * x[j];
                }
            };
            const auto r = quad::integrate_half_line_vector(f, n * n, 1e-14, 100.0,
                                                            tolerance_from(opt.cfg, 1e-10, 1e-10));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double scale = std::pow(factorial_d(std::max(i, j)), M + 1);
                    const double v = r.value[i * n + j];
                    const std::string at =
                        "M=" + std::to_string(M) + " i=" + std::to_string(i) + " j=" + std::to_string(j);
                    c.record(i == j ? rel_err(v, scale) : std::abs(v) / scale, at);
                }
        });
    }
    return c.finish();
}

CheckResult reproducing_kernel(const Options& opt) {
    const std::array<double, 3> pts = {0.5, 2.0, 5.0};
    Check c("reproducing_kernel", 1e-6);
    for (const EnsembleParams p : {EnsembleParams{2, 2}, EnsembleParams{3, 2}}) {
        c.guard(label(p), [&] {
            const int N = p.N;
            std::vector<std::vector<double>> pa, xb;
            for (double s : pts) {
                pa.push_back(scaled_p_values(p, s));
                xb.push_back(chi_values(N, p.M, s, opt.cfg));
            }
            // int H01(a, u) H01(u, b) du for all nine (a, b).
            auto f = [&](double u, std::span<double> out) {
                const auto pu = scaled_p_values(p, u);
                const auto xu = chi_values(N, p.M, u, opt.cfg);
                for (std::size_t a = 0; a < pts.size(); ++a) {
                    double left = 0.0;
                    for (int j = 0; j < N; ++j) left += pa[a][j] * xu[j];
                    for (std::size_t b = 0; b < pts.size(); ++b) {
                        double right = 0.0;
                        for (int j = 0; j < N; ++j) right += pu[j] * xb[b][j];
                        out[a * pts.size() + b] = left * right;
                    }
                }
            };
            const auto r = quad::integrate_half_line_vector(f, pts.size() * pts.size(), 1e-14, 100.0,
                                                            tolerance_from(opt.cfg, 1e-10, 1e-13));
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = 0; b < pts.size(); ++b) {
                    const double want = kernel_H01(p, pts[a], pts[b], opt.cfg);
                    c.record(rel_err(r.value[a * pts.size() + b], want),
                             label(p) + " s=" + fmt(pts[a]) + " s''=" + fmt(pts[b]));
                }
        });
    }
    return c.finish();
}

CheckResult identity_moment(const Options& opt) {
    Check c("identity_moment", 1e-8);
    for (int m : {2, 3, 4})
        for (int d : {1, 2, 3})
            for (int n : {1, 2, 3}) {
                std::vector<double> b(m, 0.0);
                b.back() = d - 1.0;
                const std::string at =
                    "m=" + std::to_string(m) + " d=" + std::to_string(d) + " n=" + std::to_string(n);
                c.guard(at, [&] {
                    const auto spec = MeijerGSpec::pure(b);
                    auto f = [&](double t) { return std::pow(t, n - 1) * meijer_g(spec, t, opt.cfg); };
                    const auto r = quad::integrate_half_line(f, 1e-14, 10.0, tolerance_from(opt.cfg, 1e-11, 1e-14));
                    c.record(rel_err(r.value, meijer_g_moment(b, n)), at);
                });
            }
    return c.finish();
}

CheckResult identity_shift_integral(const Options& opt) {
    Check c("identity_shift_integral", 1e-8);
    for (int m : {1, 2, 3})
        for (int d : {1, 2, 3})
            for (double s : {0.1, 1.0, 5.0}) {
                const std::string at = "m=" + std::to_string(m) + " d=" + std::to_string(d) + " s=" + fmt(s);
                c.guard(at, [&] {
                    const auto inner = MeijerGSpec::pure(std::vector<double>(m, 0.0));
                    auto f = [&](double t) {
                        return std::pow(t, d - 2) * std::exp(-t) * meijer_g(inner, s / t, opt.cfg);
                    };
                    const auto r = quad::integrate_half_line(f, 1e-14, 10.0, tolerance_from(opt.cfg, 1e-11, 1e-15));
                    std::vector<double> outer(m, 0.0);
                    outer.push_back(d - 1.0);
                    c.record(rel_err(r.value, meijer_g(MeijerGSpec::pure(outer), s, opt.cfg)), at);
                });
            }
    return c.finish();
}

CheckResult identity_power_shift(const Options& opt) {
    Check c("identity_power_shift", 1e-10);
    QuadratureConfig cfg = opt.cfg;
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-12);
    const std::vector<std::pair<std::string, MeijerGSpec>> shapes = {
        {"G20(0,0)", MeijerGSpec::pure({0.0, 0.0})},
        {"G30(0,0,1)", MeijerGSpec::pure({0.0, 0.0, 1.0})},
        {"chi j=2 M=2", MeijerGSpec::chi_form(2, 2)},
        {"mi i=1 j=1 M=2", MeijerGSpec::mutual_information_form(1, 1, 2)},
    };
    for (const auto& [name, spec] : shapes)
        for (double k : {0.5, 1.0})
            for (double z : {0.1, 1.0, 5.0}) {
                const std::string at = name + " k=" + fmt(k) + " z=" + fmt(z);
                c.guard(at, [&] {
                    const double lhs = std::pow(z, k) * meijer_g(spec, z, cfg);
                    c.record(rel_err(lhs, meijer_g(spec.shifted(k), z, cfg)), at);
                });
            }
    return c.finish();
}

CheckResult identity_exponential(const Options& opt) {
    Check c("identity_exponential", 1e-9);
    for (double b : {0.0, 1.0, 2.5})
        for (double z : {0.1, 1.0, 10.0}) {
            const std::string at = "b=" + fmt(b) + " z=" + fmt(z);
            c.guard(at, [&] {
                c.record(rel_err(meijer_g(MeijerGSpec::pure({b}), z, opt.cfg), std::pow(z, b) * std::exp(-z)), at);
            });
        }
    return c.finish();
}

CheckResult identity_bessel(const Options& opt) {
    Check c("identity_bessel", 1e-9);
    for (auto [b1, b2] : {std::pair{0.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.5, 0.0}})
        for (double z : {0.1, 1.0, 10.0}) {
            const std::string at = "b=(" + fmt(b1) + "," + fmt(b2) + ") z=" + fmt(z);
            c.guard(at, [&] {
                const double x = 2.0 * std::sqrt(z);
                const double k = bessel_k_integral(b1 - b2, x, opt.cfg);
                const double want = 2.0 * std::pow(z, 0.5 * (b1 + b2)) * k;
                c.record(rel_err(meijer_g(MeijerGSpec::pure({b1, b2}), z, opt.cfg), want), at);
            });
        }
    return c.finish();
}

CheckResult identity_logarithm(const Options& opt) {
    Check c("identity_logarithm", 1e-9);
    const MeijerGSpec spec{1, 2, {1.0, 1.0}, {1.0, 0.0}};
    for (double z : {0.1, 1.0, 10.0}) {
        const std::string at = "z=" + fmt(z);
        c.guard(at, [&] { c.record(rel_err(meijer_g(spec, z, opt.cfg), std::log1p(z)), at); });
    }
    return c.finish();
}

CheckResult identity_nested(const Options& opt) {
    Check c("identity_nested", 1e-6);
    std::vector<std::tuple<int, double, double>> cases;
    for (int m : {2, 3, 4})
        for (double b : {0.0, 1.0})
            for (double z : {0.1, 1.0, 5.0}) cases.emplace_back(m, b, z);
    cases.emplace_back(3, 0.0, 1e-6);
    for (auto [m, b, z] : cases) {
        const std::string at = "m=" + std::to_string(m) + " b=" + fmt(b) + " z=" + fmt(z);
        c.guard(at, [&] {
            std::vector<double> bs(m, 0.0);
            bs.back() = b;
            const double mb = meijer_g(MeijerGSpec::pure(bs), z, opt.cfg);
            c.record(rel_err(mb, nested_integral_oracle(m, b, z, opt.cfg)), at);
        });
    }
    return c.finish();
}

CheckResult identity_suite(const Options& opt) {
    // Each identity carries its own tolerance; the suite reports the worst
    // error as a fraction of the respective tolerance.
    Check c("identity_suite", 1.0, 120.0);
    for (auto* fn : {identity_moment, identity_shift_integral, identity_power_shift, identity_exponential,
                     identity_bessel, identity_logarithm, identity_nested}) {
        const CheckResult r = fn(opt);
        c.record(r.tolerance > 0 ? r.worst_error / r.tolerance : r.worst_error, r.name);
        c.note(r.name + " " + fmt(r.worst_error) + (r.passed ? "" : " FAIL"));
        if (!r.passed) c.fail(r.name + ": " + r.detail);
    }
    return c.finish();
}

CheckResult monte_carlo_histogram(const Options& opt) {
    Check c("monte_carlo_histogram", 4.0, 60.0);
    const EnsembleParams p{4, 2};
    c.guard(label(p), [&] {
        const SampleBatch batch = sample_squared_singular_values(p, opt.mc_trials, opt.seed, opt.workers);
        std::vector<double> edges;
        for (int i = 0; i <= 50; ++i) edges.push_back(2.0 * i);
        const HistogramEstimate h = estimate_density_histogram(batch, edges);
        int occupied = 0, within = 0;
        std::vector<double> z;
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            if (h.counts[b] == 0) continue;
            ++occupied;
            const double width = edges[b + 1] - edges[b];
            const double want = bin_integral(p, edges[b], edges[b + 1], opt.cfg) / width;
            const double score = std::abs(h.density[b] - want) / h.stderr_[b];
            z.push_back(score);
            if (score <= 4.0) ++within;
        }
        const double frac = occupied ? static_cast<double>(within) / occupied : 0.0;
        // The check is on the fraction; the worst error is the 95th
        // percentile z-score, which must then stay within 4.
        std::sort(z.begin(), z.end());
        const double q95 = z.empty() ? 0.0 : z[static_cast<std::size_t>(std::ceil(0.95 * z.size())) - 1];
        c.record(q95, "95th percentile z-score");
        c.note(std::to_string(within) + "/" + std::to_string(occupied) + " bins within 4 sigma (" +
               fmt(100.0 * frac) + "%), max z " + fmt(z.empty() ? 0.0 : z.back()));
        if (frac < 0.95) c.fail("fraction below 95%");
    });
    return c.finish();
}

CheckResult limit_l1(const Options& opt) {
    Check c("limit_l1", 0.08);
    for (int M : {1, 2}) {
        const EnsembleParams p{10, M};
        c.guard(label(p), [&] {
            const double S = limit_support_upper(M);
            auto fin = [&](double x) { return rescaled_density(p, x, opt.cfg); };
            const double d = l1_distance(fin, limit_law(M), 0.05, 0.98 * S);
            c.record(d, label(p));
            c.note(label(p) + " L1 " + fmt(d));
        });
    }
    return c.finish();
}

CheckResult mutual_information(const Options& opt) {
    // Normalized: quadrature mismatch over 1e-5 and MC z-score over 3.
    Check c("mutual_information", 1.0);
    const std::array<double, 3> db = {0.0, 10.0, 20.0};
    double worst_rel = 0.0, worst_z = 0.0;
    for (const EnsembleParams p : {EnsembleParams{2, 3}, EnsembleParams{4, 3}}) {
        c.guard(label(p), [&] {
            SampleBatch batch;
            if (opt.monte_carlo) batch = sample_squared_singular_values(p, opt.mc_trials, opt.seed, opt.workers);
            for (double g : db) {
                const double gamma = snr_db_to_linear(g);
                const double a = mutual_information_analytic(p, gamma);
                const double q = mutual_information_quadrature(p, gamma, opt.cfg);
                const double r = rel_err(a, q);
                worst_rel = std::max(worst_rel, r);
                c.record(r / 1e-5, label(p) + " " + fmt(g) + " dB quadrature");
                if (opt.monte_carlo) {
                    const MIEstimate e = estimate_mutual_information(batch, g);
                    const double z = std::abs(a - e.mean) / e.stderr_;
                    worst_z = std::max(worst_z, z);
                    c.record(z / 3.0, label(p) + " " + fmt(g) + " dB Monte Carlo");
                }
            }
        });
    }
    c.guard("ordering", [&] {
        for (double g : db) {
            const double gamma = snr_db_to_linear(g);
            const double m2 = mutual_information_analytic({2, 3}, gamma);
            const double m4 = mutual_information_analytic({4, 3}, gamma);
            const double m8 = mutual_information_analytic({8, 3}, gamma);
            if (!(m8 > m4 && m4 > m2)) c.fail("ordering N=8 > 4 > 2 violated at " + fmt(g) + " dB");
        }
    });
    c.note("worst rel vs quadrature " + fmt(worst_rel) + ", worst MC z " + fmt(worst_z));
    return c.finish();
}

CheckResult resolvent(const Options&) {
    Check c("resolvent", 1e-5);
    for (double x : {0.5, 2.0, 3.9}) {
        const std::string at = "M=1 x=" + fmt(x);
        c.guard(at, [&] { c.record(rel_err(limit_density_general(1, x), mp_density(x)), at); });
    }
    for (double x : {0.5, 2.0, 6.0}) {
        const std::string at = "M=2 x=" + fmt(x);
        c.guard(at, [&] { c.record(rel_err(limit_density_general(2, x), limit_density_m2(x)), at); });
    }
    // Norm and first moment, 1e-4 each; recorded relative to that bound.
    for (int M : {1, 2}) {
        c.guard("M=" + std::to_string(M) + " moments", [&] {
            const auto rho = limit_law(M);
            for (int k : {0, 1}) {
                const double v = integrate_limit_law(rho, M, k);
                c.record(std::abs(v - 1.0) / 1e-4 * 1e-5,
                         "M=" + std::to_string(M) + " moment " + std::to_string(k));
            }
        });
    }
    return c.finish();
}

CheckResult laguerre_orthogonality(const Options&) {
    Check c("laguerre_orthogonality", 1e-9);
    constexpr int n = 7;
    std::vector<MonicPolynomial> L;
    for (int i = 0; i < n; ++i) L.push_back(monic_laguerre(i));
    auto f = [&](double x, std::span<double> out) {
        std::array<double, n> v{};
        for (int i = 0; i < n; ++i) v[i] = L[i](x);
        const double w = std::exp(-x);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[i * n + j] = w * v[i] * v[j];
    };
    quad::Tolerance t;
    t.rel = 1e-12;
    t.abs = 1e-12;
    const auto r = quad::integrate_half_line_vector(f, n * n, 1e-14, 100.0, t);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double scale = std::pow(factorial_d(std::max(i, j)), 2);
            const double v = r.value[i * n + j];
            c.record(i == j ? rel_err(v, scale) : std::abs(v) / scale,
                     "i=" + std::to_string(i) + " j=" + std::to_string(j));
        }
    return c.finish();
}

CheckResult biorthogonality_two_variable(const Options& opt) {
    // int int p_i(s) s^j w(s, t) ds dt, inner integral over s on (0, inf),
    // outer over t; must reproduce the bimoment Gamma(i+j+1)... closed form
    // computed exactly.
    Check c("biorthogonality_two_variable", 1e-6);
    constexpr int n = 3;
    for (int M : {2, 3}) {
        c.guard("M=" + std::to_string(M), [&] {
            std::vector<MonicPolynomial> p;
            for (int i = 0; i < n; ++i) p.push_back(p_polynomial(i, M));
            auto outer = [&](double t, std::span<double> out) {
                auto inner = [&](double s, std::span<double> in) {
                    const double w = weight_w(M, s, t, opt.cfg);
                    for (int i = 0; i < n; ++i) {
                        const double pi = p[i](s);
                        for (int j = 0; j < n; ++j) in[i * n + j] = pi * std::pow(t, j) * w;
                    }
                };
                const auto r = quad::integrate_half_line_vector(inner, n * n, 1e-12 * t, 10.0 * t,
                                                                tolerance_from(opt.cfg, 1e-9, 1e-12));
                std::copy(r.value.begin(), r.value.end(), out.begin());
            };
            const auto r =
                quad::integrate_half_line_vector(outer, n * n, 1e-12, 10.0, tolerance_from(opt.cfg, 1e-8, 1e-10));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    // int t^j h_i-projection: equals squared_norm when i == j
                    // and zero for j < i.
                    const double v = r.value[i * n + j];
                    const std::string at =
                        "M=" + std::to_string(M) + " i=" + std::to_string(i) + " j=" + std::to_string(j);
                    if (j < i) {
                        c.record(std::abs(v) / squared_norm(i, M).convert_to<double>(), at);
                    } else if (j == i) {
                        c.record(rel_err(v, squared_norm(i, M).convert_to<double>()), at);
                    }
                }
        });
    }
    return c.finish();
}

CheckResult chi_forms(const Options& opt) {
    Check c("chi_forms", 1e-8);
    for (int M : {2, 3})
        for (double s : {0.5, 2.0, 10.0}) {
            const std::string base = "M=" + std::to_string(M) + " s=" + fmt(s);
            c.guard(base, [&] {
                const auto sum = chi_finite_sum(5, M, s, opt.cfg);
                for (int j = 0; j < 5; ++j)
                    c.record(rel_err(sum[j], chi_contour(j, M, s, opt.cfg)), base + " j=" + std::to_string(j));
            });
        }
    return c.finish();
}

CheckResult jpdf_routes(const Options& opt) {
    Check c("jpdf_routes", 1e-7);
    const std::vector<double> pts = {0.7, 2.3, 5.1};
    for (const EnsembleParams p : {EnsembleParams{2, 1}, EnsembleParams{2, 2}, EnsembleParams{3, 2},
                                   EnsembleParams{3, 3}}) {
        c.guard(label(p), [&] {
            const auto x = jpdf_cross_check(p, std::span(pts.data(), static_cast<std::size_t>(p.N)), opt.cfg);
            c.record(x.rel_diff, label(p));
        });
    }
    c.guard("N=1 M=1", [&] {
        const double s = 2.0;
        c.record(rel_err(jpdf_eval({1, 1}, std::span(&s, 1), opt.cfg).value.value(), std::exp(-2.0)), "N=1 M=1");
    });
    return c.finish();
}

CheckResult partial_sum_identity(const Options& opt) {
    // The residual H11 with the subtracted G-term decays with N; it is not
    // monotone in N everywhere, so the check compares N=40 against N=5.
    Check c("partial_sum_identity", 1.0);
    for (auto [s, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        const std::string at = "s=" + fmt(s) + " t=" + fmt(t);
        c.guard(at, [&] {
            const double r5 = std::abs(kernel_H11({5, 2}, t, s, opt.cfg));
            const double r40 = std::abs(kernel_H11({40, 2}, t, s, opt.cfg));
            c.record(r40 / r5, at);
            c.note(at + ": |H11| " + fmt(r5) + " at N=5, " + fmt(r40) + " at N=40");
            if (!(r40 < r5)) c.fail(at + ": no decrease");
        });
    }
    return c.finish();
}

CheckResult density_triple_sum(const Options& opt) {
    Check c("density_triple_sum", 1e-8);
    const EnsembleParams p{3, 2};
    for (double s : {0.5, 5.0, 50.0}) {
        const std::string at = label(p) + " s=" + fmt(s);
        c.guard(at, [&] {
            c.record(rel_err(density_r1_triple_sum(p, s, opt.cfg), density_r1(p, s, opt.cfg)), at);
        });
    }
    return c.finish();
}

CheckResult density_nonnegative(const Options& opt) {
    Check c("density_nonnegative", 1e-12);
    for (const EnsembleParams p : {EnsembleParams{1, 1}, EnsembleParams{3, 2}, EnsembleParams{5, 3},
                                   EnsembleParams{8, 2}}) {
        c.guard(label(p), [&] {
            const double top = 10.0 * std::pow(p.N, p.M);
            for (int i = 0; i <= 60; ++i) {
                const double s = 1e-3 * std::pow(top / 1e-3, i / 60.0);
                const double v = density_r1(p, s, opt.cfg);
                c.record(std::max(0.0, -v), label(p) + " s=" + fmt(s));
            }
        });
    }
    return c.finish();
}

CheckResult rescaled_convergence(const Options& opt) {
    Check c("rescaled_convergence", 1.0);
    for (int M : {1, 2}) {
        c.guard("M=" + std::to_string(M), [&] {
            const double S = limit_support_upper(M);
            std::array<double, 2> d{};
            int k = 0;
            for (int N : {3, 10}) {
                const EnsembleParams p{N, M};
                auto fin = [&](double x) { return rescaled_density(p, x, opt.cfg); };
                d[k++] = l1_distance(fin, limit_law(M), 0.05, S);
            }
            c.record(d[1] / d[0], "M=" + std::to_string(M));
            c.note("M=" + std::to_string(M) + " L1 " + fmt(d[0]) + " -> " + fmt(d[1]));
            if (!(d[1] < d[0])) c.fail("M=" + std::to_string(M) + ": no decrease");
        });
    }
    return c.finish();
}

CheckResult limit_general_normalization(const Options&) {
    Check c("limit_general_normalization", 1e-4);
    for (int M = 1; M <= 6; ++M) {
        c.guard("M=" + std::to_string(M), [&] {
            auto rho = [M](double x) { return limit_density_general(M, x); };
            for (int k : {0, 1})
                c.record(std::abs(integrate_limit_law(rho, M, k) - 1.0),
                         "M=" + std::to_string(M) + " moment " + std::to_string(k));
        });
    }
    return c.finish();
}

CheckResult mutual_information_jensen(const Options&) {
    Check c("mutual_information_jensen", 0.0);
    for (const EnsembleParams p : {EnsembleParams{2, 2}, EnsembleParams{2, 3}, EnsembleParams{3, 2},
                                   EnsembleParams{4, 3}})
        for (double gamma : {1.0, 10.0, 100.0}) {
            const std::string at = label(p) + " gamma=" + fmt(gamma);
            c.guard(at, [&] {
                const double mi = mutual_information_analytic(p, gamma);
                c.record(std::max(0.0, mi - p.N * std::log1p(gamma)), at);
            });
        }
    return c.finish();
}

CheckResult mutual_information_identity_route(const Options& opt) {
    Check c("mutual_information_identity_route", 1e-5);
    for (const EnsembleParams p : {EnsembleParams{2, 2}, EnsembleParams{2, 3}, EnsembleParams{3, 2}})
        for (double gamma : {1.0, 10.0}) {
            const std::string at = label(p) + " gamma=" + fmt(gamma);
            c.guard(at, [&] {
                c.record(rel_err(mutual_information_analytic(p, gamma),
                                 mutual_information_quadrature(p, gamma, opt.cfg)),
                         at);
            });
        }
    return c.finish();
}

CheckResult monte_carlo_first_moment(const Options& opt) {
    Check c("monte_carlo_first_moment", 3.0);
    for (int N = 1; N <= 4; ++N)
        for (int M = 1; M <= 3; ++M) {
            const EnsembleParams p{N, M};
            c.guard(label(p), [&] {
                const auto batch = sample_squared_singular_values(p, opt.mc_trials, opt.seed + 17 * N + M, opt.workers);
                const MeanEstimate e = estimate_moment(batch, 1);
                c.record(std::abs(e.mean - std::pow(N, M)) / e.stderr_, label(p));
                if (N == 2 && M == 2) {
                    const MeanEstimate e2 = estimate_moment(batch, 2);
                    c.record(std::abs(e2.mean - 52.0) / e2.stderr_, label(p) + " k=2");
                }
            });
        }
    return c.finish();
}

CheckResult monte_carlo_marchenko_pastur(const Options& opt) {
    Check c("monte_carlo_marchenko_pastur", 0.05);
    const EnsembleParams p{10, 1};
    c.guard(label(p), [&] {
        const auto batch = sample_squared_singular_values(p, opt.mc_trials, opt.seed + 1, opt.workers);
        // Histogram of x = s/N on (0.2, 3.8).
        const double a = 0.2, b = 3.8;
        const int bins = 72;
        std::vector<double> edges;
        for (int i = 0; i <= bins; ++i) edges.push_back(p.N * (a + (b - a) * i / bins));
        const HistogramEstimate h = estimate_density_histogram(batch, edges);
        double l1 = 0.0;
        quad::Tolerance t;
        t.rel = 1e-9;
        t.abs = 1e-12;
        for (int i = 0; i < bins; ++i) {
            const double xa = edges[i] / p.N, xb = edges[i + 1] / p.N;
            const double want = quad::integrate(mp_density, xa, xb, t).value;
            // h.density is per unit s with mass N; per unit x with mass 1 it
            // is density * N / N.
            const double got = h.density[i] * (edges[i + 1] - edges[i]) / p.N;
            l1 += std::abs(got - want);
        }
        c.record(l1, label(p));
    });
    return c.finish();
}

CheckResult monte_carlo_determinism(const Options& opt) {
    Check c("monte_carlo_determinism", 0.0);
    const EnsembleParams p{3, 2};
    c.guard(label(p), [&] {
        const auto a = sample_squared_singular_values(p, 500, opt.seed, 1);
        const auto b = sample_squared_singular_values(p, 500, opt.seed, 3);
        const auto d = sample_squared_singular_values(p, 500, opt.seed, 1);
        const bool same = a.samples.size() == b.samples.size() &&
                          std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(double)) == 0 &&
                          std::memcmp(a.samples.data(), d.samples.data(), a.samples.size() * sizeof(double)) == 0;
        c.record(same ? 0.0 : 1.0, "worker split");
    });
    return c.finish();
}

CheckResult simd_equivalence(const Options&) {
    Check c("simd_equivalence", 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::string tested;
    for (simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
        if (!simd::isa_supported(isa)) continue;
        tested += std::string(tested.empty() ? "" : ",") + std::string(simd::isa_name(isa));
        for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u}) {
            std::vector<double> A(2 * n * n), B(2 * n * n), C0(2 * n * n), C1;
            for (auto& v : A) v = u(rng);
            for (auto& v : B) v = u(rng);
            for (auto& v : C0) v = u(rng);
            C1 = C0;
            simd::cgemm_accumulate(simd::Isa::scalar, n, A.data(), B.data(), C0.data());
            simd::cgemm_accumulate(isa, n, A.data(), B.data(), C1.data());
            c.record(std::memcmp(C0.data(), C1.data(), C0.size() * sizeof(double)) == 0 ? 0.0 : 1.0,
                     std::string(simd::isa_name(isa)) + " cgemm n=" + std::to_string(n));
        }
        for (int deg : {0, 3, 12}) {
            const auto poly = p_polynomial(deg, 2);
            std::vector<double> hi, lo;
            for (const auto& k : poly.coefficients()) {
                const double h = k.convert_to<double>();
                hi.push_back(h);
                lo.push_back((k - BigInt(h)).convert_to<double>());
            }
            std::vector<double> x(37), y0(37), y1(37);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.01 + 3.0 * i;
            simd::horner_compensated(simd::Isa::scalar, hi, lo, x, y0);
            simd::horner_compensated(isa, hi, lo, x, y1);
            c.record(std::memcmp(y0.data(), y1.data(), y0.size() * sizeof(double)) == 0 ? 0.0 : 1.0,
                     std::string(simd::isa_name(isa)) + " horner deg=" + std::to_string(deg));
        }
    }
    c.note(tested.empty() ? "no vector ISA available, scalar only" : "tested " + tested);
    return c.finish();
}

std::vector<CheckResult> run_all(const Options& opt) {
    std::vector<CheckResult> out;
    for (auto* fn : {andreief_normalization, density_norm, moments, biorthogonality, reproducing_kernel,
                     identity_suite})
        out.push_back(fn(opt));
    if (opt.monte_carlo) out.push_back(monte_carlo_histogram(opt));
    for (auto* fn : {limit_l1, mutual_information, resolvent, laguerre_orthogonality, biorthogonality_two_variable,
                     chi_forms, jpdf_routes, partial_sum_identity, density_triple_sum, density_nonnegative,
                     rescaled_convergence, limit_general_normalization, mutual_information_jensen,
                     mutual_information_identity_route, simd_equivalence})
        out.push_back(fn(opt));
    if (opt.monte_carlo)
        for (auto* fn : {monte_carlo_first_moment, monte_carlo_marchenko_pastur, monte_carlo_determinism})
            out.push_back(fn(opt));
    return out;
}

} // namespace ginibre::validation
