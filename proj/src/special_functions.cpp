#include "ginibre/special_functions.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ginibre {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

// ln sin(pi w), stable for large |Im w|. Imaginary part is only defined
// modulo 2 pi.
cplx log_sin_pi(cplx w) {
    if (std::abs(w.imag()) < 8.0) return std::log(std::sin(pi * w));
    const bool upper = w.imag() > 0.0;
    const cplx v = upper ? w : std::conj(w);
    // sin(pi v) = e^{-i pi v} (e^{2 i pi v} - 1) / (2i), |e^{2 i pi v}| << 1
    const cplx i{0.0, 1.0};
    const cplx r = -i * pi * v + std::log(1.0 - std::exp(2.0 * i * pi * v)) + std::log(i / 2.0);
    return upper ? r : std::conj(r);
}

// Stirling series for ln Gamma, valid for |w| >= 15, Re w > 0.
cplx stirling(cplx w) {
    static constexpr double coef[] = {
        1.0 / 12.0,           -1.0 / 360.0,      1.0 / 1260.0,     -1.0 / 1680.0,
        1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0,
    };
    const cplx inv = 1.0 / w;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx pw = inv;
    for (double c : coef) {
        series += c * pw;
        pw *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi) + series;
}

double real_lgamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// Factor structure of the Mellin-Barnes integrand after cancelling
// Gamma-ratios whose parameters differ by integers into linear factors.
struct Integrand {
    double log_z = 0.0;
    std::vector<double> b_num; // Gamma(b - u)
    std::vector<double> a_num; // Gamma(1 - a + u)
    std::vector<double> b_den; // 1 / Gamma(1 - b + u)
    std::vector<double> a_den; // 1 / Gamma(a - u)
    std::vector<double> zeros;       // (u - r)
    std::vector<double> left_poles;  // 1 / (u - r), a-family
    std::vector<double> right_poles; // 1 / (u - r), b-family
    double sign = 1.0;
    double left_bound = -std::numeric_limits<double>::infinity();
    double right_bound = std::numeric_limits<double>::infinity();
    double decay = 0.0; // |f| ~ exp(-pi * decay * |Im u|)

    cplx log_value(cplx u) const {
        cplx acc = u * log_z;
        for (double b : b_num) acc += log_gamma(b - u);
        for (double a : a_num) acc += log_gamma(1.0 - a + u);
        for (double b : b_den) acc -= log_gamma(1.0 - b + u);
        for (double a : a_den) acc -= log_gamma(a - u);
        cplx prod = 1.0;
        for (double r : zeros) prod *= (u - r);
        for (double r : left_poles) prod /= (u - r);
        for (double r : right_poles) prod /= (u - r);
        return acc + std::log(prod);
    }

    // Smoothed real-axis profile used to place the contour near the saddle
    // point. Gammas with poles on the relevant side are taken on the axis
    // itself so the profile blows up toward the pole families; everything
    // with real-axis zeros is taken half a unit above the axis.
    double profile(double c) const {
        constexpr double h = 0.5;
        double acc = c * log_z;
        for (double b : b_num) acc += real_lgamma(b - c);
        for (double a : a_num) acc += real_lgamma(1.0 - a + c);
        for (double b : b_den) acc -= log_gamma(cplx(1.0 - b + c, h)).real();
        for (double a : a_den) acc -= log_gamma(cplx(a - c, -h)).real();
        for (double r : zeros) acc += 0.5 * std::log((c - r) * (c - r) + h * h);
        for (double r : left_poles) acc -= std::log(std::abs(c - r));
        for (double r : right_poles) acc -= std::log(std::abs(c - r));
        return acc;
    }
};

Integrand build_integrand(const MeijerGSpec& spec, double z) {
    Integrand f;
    f.log_z = std::log(z);
    std::vector<double> b_num(spec.b.begin(), spec.b.begin() + spec.m);
    std::vector<double> b_den(spec.b.begin() + spec.m, spec.b.end());
    std::vector<double> a_num(spec.a.begin(), spec.a.begin() + spec.n);
    std::vector<double> a_den(spec.a.begin() + spec.n, spec.a.end());
    f.decay = spec.m + spec.n - 0.5 * (spec.p() + spec.q());

    // Gamma(1 - a + u) / Gamma(1 - b + u) with b - a = d integer.
    for (auto it = a_num.begin(); it != a_num.end();) {
        const double a = *it;
        auto best = b_den.end();
        double best_d = 0.0;
        for (auto jt = b_den.begin(); jt != b_den.end(); ++jt) {
            const double d = *jt - a;
            if (!is_integer(d)) continue;
            const double rd = std::round(d);
            const bool better = best == b_den.end() || (rd >= 0 && (best_d < 0 || rd < best_d)) ||
                                (rd < 0 && best_d < 0 && rd > best_d);
            if (better) {
                best = jt;
                best_d = rd;
            }
        }
        if (best == b_den.end()) {
            ++it;
            continue;
        }
        const int d = static_cast<int>(best_d);
        if (d >= 0) {
            for (int r = 0; r < d; ++r) f.zeros.push_back(a + r);
        } else {
            for (int r = 1; r <= -d; ++r) f.left_poles.push_back(a - r);
        }
        b_den.erase(best);
        it = a_num.erase(it);
    }
    // Gamma(b - u) / Gamma(a - u) with b - a = d integer.
    for (auto it = b_num.begin(); it != b_num.end();) {
        const double b = *it;
        auto best = a_den.end();
        double best_d = 0.0;
        for (auto jt = a_den.begin(); jt != a_den.end(); ++jt) {
            const double d = b - *jt;
            if (!is_integer(d)) continue;
            const double rd = std::round(d);
            const bool better = best == a_den.end() || (rd >= 0 && (best_d < 0 || rd < best_d)) ||
                                (rd < 0 && best_d < 0 && rd > best_d);
            if (better) {
                best = jt;
                best_d = rd;
            }
        }
        if (best == a_den.end()) {
            ++it;
            continue;
        }
        const double a = *best;
        const int d = static_cast<int>(best_d);
        if (d >= 0) {
            for (int r = 0; r < d; ++r) f.zeros.push_back(a + r);
            if (d % 2 == 1) f.sign = -f.sign;
        } else {
            for (int r = 0; r < -d; ++r) f.right_poles.push_back(b + r);
            if ((-d) % 2 == 1) f.sign = -f.sign;
        }
        a_den.erase(best);
        it = b_num.erase(it);
    }
    // A paired Gamma(b - u) may have been the one pinning the right bound;
    // its poles survive as right_poles, so both lists feed the bounds.
    for (double b : b_num) f.right_bound = std::min(f.right_bound, b);
    for (double r : f.right_poles) f.right_bound = std::min(f.right_bound, r);
    for (double a : a_num) f.left_bound = std::max(f.left_bound, a - 1.0);
    for (double r : f.left_poles) f.left_bound = std::max(f.left_bound, r);

    f.b_num = std::move(b_num);
    f.a_num = std::move(a_num);
    f.b_den = std::move(b_den);
    f.a_den = std::move(a_den);
    return f;
}

double choose_contour(const Integrand& f, double z) {
    const bool bounded_left = std::isfinite(f.left_bound);
    const bool bounded_right = std::isfinite(f.right_bound);
    if (!bounded_right) {
        throw DomainError("meijer_g: no b-poles to the right of the contour are supported");
    }
    double lo, hi;
    if (bounded_left) {
        const double width = f.right_bound - f.left_bound;
        lo = f.left_bound + 0.25 * width;
        hi = f.right_bound - 0.25 * width;
    } else {
        hi = f.right_bound - 0.15;
        const double nb = std::max<std::size_t>(1, f.b_num.size());
        const double span = 10.0 + 2.0 * std::pow(std::max(1.0, z), 1.0 / nb) +
                            static_cast<double>(f.zeros.size());
        lo = hi - span;
    }
    if (hi <= lo) return 0.5 * (lo + hi);

    constexpr int grid = 48;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double c = lo + (hi - lo) * i / grid;
        const double v = f.profile(c);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double x0 = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double x3 = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = x3 - g * (x3 - x0), x2 = x0 + g * (x3 - x0);
    double f1 = f.profile(x1), f2 = f.profile(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = f.profile(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = f.profile(x2);
        }
    }
    return 0.5 * (x0 + x3);
}

} // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("QuadratureConfig: rel_tol and abs_tol must be positive");
    }
    if (truncation_height && !(*truncation_height > 0.0)) {
        throw DomainError("QuadratureConfig: truncation_height must be positive");
    }
    if (max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
}

MeijerGSpec MeijerGSpec::pure(std::vector<double> b) {
    MeijerGSpec s;
    s.m = static_cast<int>(b.size());
    s.b = std::move(b);
    return s;
}

MeijerGSpec MeijerGSpec::chi_form(int j, int M) {
    MeijerGSpec s;
    s.m = M;
    s.n = 1;
    s.a = {-static_cast<double>(j)};
    s.b.assign(static_cast<std::size_t>(M) + 1, 0.0);
    return s;
}

MeijerGSpec MeijerGSpec::mutual_information_form(int i, int j, int M) {
    MeijerGSpec s;
    s.m = M + 2;
    s.n = 1;
    s.a = {0.0, 1.0};
    s.b = {0.0, 0.0};
    for (int k = 0; k < M - 1; ++k) s.b.push_back(j + 1.0);
    s.b.push_back(i + j + 1.0);
    return s;
}

MeijerGSpec MeijerGSpec::shifted(double k) const {
    MeijerGSpec s = *this;
    for (auto& x : s.a) x += k;
    for (auto& x : s.b) x += k;
    return s;
}

void MeijerGSpec::validate() const {
    if (m < 0 || n < 0 || m > q() || n > p()) {
        throw DomainError("MeijerGSpec: require 0 <= m <= q and 0 <= n <= p, got " + to_string());
    }
    if (!(m + n > 0.5 * (p() + q()))) {
        throw DomainError("MeijerGSpec: Mellin-Barnes integral does not converge for " + to_string());
    }
    for (double x : a)
        if (!std::isfinite(x)) throw DomainError("MeijerGSpec: non-finite parameter");
    for (double x : b)
        if (!std::isfinite(x)) throw DomainError("MeijerGSpec: non-finite parameter");
}

std::string MeijerGSpec::to_string() const {
    std::ostringstream os;
    os << "G^{" << m << "," << n << "}_{" << p() << "," << q() << "}(";
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ";";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << ")";
    return os.str();
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    return real_lgamma(x);
}

std::complex<double> log_gamma(std::complex<double> w) {
    if (w.real() < 0.5) {
        // Reflection: Gamma(w) Gamma(1 - w) = pi / sin(pi w).
        return std::log(pi) - log_sin_pi(w) - log_gamma(1.0 - w);
    }
    if (std::abs(w) >= 15.0) return stirling(w);
    const int shift = static_cast<int>(std::ceil(15.0 - w.real()));
    cplx prod = 1.0;
    for (int k = 0; k < shift; ++k) prod *= (w + static_cast<double>(k));
    return stirling(w + static_cast<double>(shift)) - std::log(prod);
}

MeijerGResult meijer_g_detailed(const MeijerGSpec& spec, double z, const QuadratureConfig& cfg,
                                bool full_line) {
    spec.validate();
    cfg.validate();
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("meijer_g: z must be positive and finite");

    const Integrand f = build_integrand(spec, z);
    if (!(f.left_bound < f.right_bound)) {
        throw DomainError("meijer_g: a-poles and b-poles overlap for " + spec.to_string());
    }

    double c;
    if (cfg.contour_offset) {
        c = *cfg.contour_offset;
        if (!(c > f.left_bound && c < f.right_bound)) {
            throw DomainError("meijer_g: contour_offset does not separate the pole families");
        }
    } else {
        c = choose_contour(f, z);
    }

    // Peak modulus on the line; the integrand is rescaled by it so that
    // quadrature works on O(1) numbers and abs_tol is peak-relative.
    double log_peak = -std::numeric_limits<double>::infinity();
    for (double y : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        log_peak = std::max(log_peak, f.log_value(cplx(c, y)).real());
    }
    if (!std::isfinite(log_peak)) {
        throw NumericalError("meijer_g: integrand not finite on the contour for " + spec.to_string(),
                             std::numeric_limits<double>::infinity());
    }
    // Far in the exponential tail the whole integral is below the smallest
    // subnormal; the height search would run off first.
    if (log_peak + std::log(1e4) < std::log(std::numeric_limits<double>::denorm_min())) {
        MeijerGResult out;
        out.contour_offset = c;
        out.imag_residual = full_line ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    double height;
    if (cfg.truncation_height) {
        height = *cfg.truncation_height;
    } else {
        const double target = std::log(std::max(1e-2 * std::min(cfg.rel_tol, cfg.abs_tol), 1e-18));
        const double tail_factor = -std::log(pi * f.decay);
        height = 2.0;
        int hits = 0;
        while (height < 1e4) {
            const double lv = f.log_value(cplx(c, height)).real() - log_peak + tail_factor;
            hits = lv < target ? hits + 1 : 0;
            if (hits == 2) break;
            height *= 1.2;
        }
        if (height >= 1e4) {
            throw NumericalError("meijer_g: integrand does not decay along the contour",
                                 std::numeric_limits<double>::infinity());
        }
    }

    quad::Tolerance tol{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, 4000};
    MeijerGResult out;
    out.contour_offset = c;
    out.truncation_height = height;
    const double scale = f.sign * std::exp(log_peak);
    auto point = [&](double y) { return std::exp(f.log_value(cplx(c, y)) - log_peak); };

    if (!full_line) {
        auto r = quad::integrate([&](double y) { return point(y).real(); }, 0.0, height, tol);
        if (!r.converged) {
            throw NumericalError("meijer_g: quadrature did not converge for " + spec.to_string(),
                                 r.abs_error * std::abs(scale) / pi);
        }
        out.value = scale * r.value / pi;
        out.abs_error = std::abs(scale) * r.abs_error / pi;
        out.imag_residual = std::numeric_limits<double>::quiet_NaN();
        out.evaluations = r.evaluations;
    } else {
        auto r = quad::integrate_vector(
            [&](double y, std::span<double> v) {
                const cplx w = point(y);
                v[0] = w.real();
                v[1] = w.imag();
            },
            2, -height, height, quad::Tolerance{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, 4000});
        if (!r.converged) {
            throw NumericalError("meijer_g: quadrature did not converge for " + spec.to_string(),
                                 r.abs_error[0] * std::abs(scale) / (2 * pi));
        }
        out.value = scale * r.value[0] / (2.0 * pi);
        out.abs_error = std::abs(scale) * r.abs_error[0] / (2.0 * pi);
        out.imag_residual = scale * r.value[1] / (2.0 * pi);
        out.evaluations = r.evaluations;
    }
    return out;
}

double meijer_g(const MeijerGSpec& spec, double z, const QuadratureConfig& cfg) {
    return meijer_g_detailed(spec, z, cfg, false).value;
}

double meijer_g_moment(std::span<const double> b, int n_exponent) {
    if (n_exponent < 1) throw DomainError("meijer_g_moment: exponent must be a positive integer");
    double acc = 0.0;
    for (double bj : b) {
        const double x = bj + n_exponent;
        if (!(x > 0.0)) throw DomainError("meijer_g_moment: Gamma evaluated at a non-positive argument");
        acc += real_lgamma(x);
    }
    return std::exp(acc);
}

namespace {

// Trapezoidal sum over the lattice h*Z of the nested log-variable integrand.
// v_0 = 0 (x_0 = 1); level k integrates v_k over [lower_k, v_{k-1} + cut],
// where cut = ln 60 puts the dropped tails below exp(-60).
struct NestedTrapezoid {
    int m;
    double b, z, h;
    double cut = std::log(60.0);
    double log_z = std::log(z);

    double level_sum(int level, double prev) const {
        const double lower = log_z - (m - level) * cut;
        const double upper = prev + cut;
        double sum = 0.0;
        for (long k = static_cast<long>(std::ceil(lower / h)); k * h <= upper; ++k) {
            const double v = k * h;
            double w = std::exp(-std::exp(v - prev));
            if (level == 1) w *= std::exp(b * v);
            if (level == m - 1) {
                w *= std::exp(-z * std::exp(-v));
            } else {
                w *= level_sum(level + 1, v);
            }
            sum += w;
        }
        return sum * h;
    }
};

double nested_trapezoid(int m, double b, double z, double h) {
    return NestedTrapezoid{m, b, z, h}.level_sum(1, 0.0);
}

} // namespace

double nested_integral_oracle(int m, double b, double z, const QuadratureConfig& cfg) {
    if (m < 2 || m > 4) throw DomainError("nested_integral_oracle: m must be in [2, 4]");
    if (!(z > 0.0)) throw DomainError("nested_integral_oracle: z must be positive");
    if (!(b > -1.0)) throw DomainError("nested_integral_oracle: b must exceed -1 for convergence");
    double h = 0.5;
    double prev = nested_trapezoid(m, b, z, h);
    const double rel = std::max(cfg.rel_tol, 1e-13);
    const int levels = std::min(cfg.max_subdivisions, 7);
    for (int level = 0; level < levels; ++level) {
        h *= 0.5;
        const double cur = nested_trapezoid(m, b, z, h);
        if (std::abs(cur - prev) <= rel * std::abs(cur)) return cur;
        prev = cur;
    }
    throw NumericalError("nested_integral_oracle: trapezoid refinement did not converge",
                         std::abs(prev));
}

double bessel_k_integral(double nu, double x, const QuadratureConfig& cfg) {
    if (!(x > 0.0)) throw DomainError("bessel_k_integral: x must be positive");
    // e^{-x (cosh t - 1)} cosh(nu t); the factor e^{-x} is restored at the end.
    double upper = 1.0;
    while (x * (std::cosh(upper) - 1.0) - std::abs(nu) * upper < 745.0) upper += 0.5;
    auto f = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
    quad::Tolerance tol{std::min(cfg.rel_tol, 1e-13), 1e-300, 30, 4000};
    auto r = quad::integrate(f, 0.0, upper, tol);
    if (!r.converged) throw NumericalError("bessel_k_integral: quadrature did not converge", r.abs_error);
    return std::exp(-x) * r.value;
}

} // namespace ginibre
