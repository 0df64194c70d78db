#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature, scalar and
// vector-valued, plus a helper for integrals over (0, inf) in the logarithmic
// variable. Header-only: the integrands are lambdas on the hot path.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace ginibre::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct VectorResult {
    std::vector<double> value;
    std::vector<double> abs_error;
    int evaluations = 0;
    bool converged = false;
};

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    int max_depth = 20;       // bisection levels below the initial interval
    int max_intervals = 4000; // hard cap on the partition size
};

namespace detail {

inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980468765, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Weights of the embedded 10-point Gauss rule on the odd Kronrod nodes.
inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    double value, error;
    double floor; // rounding level of the rule on this panel
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// QUADPACK's error heuristic for a single panel.
inline double panel_error(double kronrod, double gauss, double resabs, double resasc,
                          double half) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return err;
}

inline double roundoff_floor(double resabs) {
    return 50.0 * std::numeric_limits<double>::epsilon() * resabs;
}

template <class F>
Panel gk21(F& f, double a, double b, int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 21> fv{};
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * kronrod_nodes[i];
        fv[2 * i] = f(center - dx);
        fv[2 * i + 1] = f(center + dx);
    }
    fv[20] = f(center);

    double kr = kronrod_weights[10] * fv[20];
    double ga = 0.0;
    double resabs = kronrod_weights[10] * std::abs(fv[20]);
    for (std::size_t i = 0; i < 10; ++i) {
        const double pair = fv[2 * i] + fv[2 * i + 1];
        kr += kronrod_weights[i] * pair;
        resabs += kronrod_weights[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
        if (i % 2 == 1) ga += gauss_weights[i / 2] * pair;
    }
    const double mean = 0.5 * kr;
    double resasc = kronrod_weights[10] * std::abs(fv[20] - mean);
    for (std::size_t i = 0; i < 10; ++i) {
        resasc += kronrod_weights[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
    }
    const double h = std::abs(half);
    return Panel{a, b, kr * half, panel_error(kr, ga, resabs * h, resasc * h, half), roundoff_floor(resabs * h),
                 depth};
}

} // namespace detail

/// Integrates f over [a, b] by globally adaptive bisection of the panel with
/// the largest error estimate. Never throws; inspect Result::converged.
/// An error estimate within twice the summed rounding floor of the panels
/// counts as converged: bisection cannot improve on it.
template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<detail::Panel> heap;
    std::vector<detail::Panel> frozen; // panels at the depth limit
    auto first = detail::gk21(f, a, b, 0);
    out.evaluations = 21;
    double total = first.value;
    double error = first.error;
    double floor = first.floor;
    heap.push(first);

    while (true) {
        const double target = std::max({tol.abs, tol.rel * std::abs(total), 2.0 * floor});
        if (error <= target) {
            out.converged = true;
            break;
        }
        if (heap.empty() || static_cast<int>(heap.size() + frozen.size()) >= tol.max_intervals) break;
        auto worst = heap.top();
        heap.pop();
        if (worst.depth >= tol.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk21(f, worst.a, mid, worst.depth + 1);
        auto right = detail::gk21(f, mid, worst.b, worst.depth + 1);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }
    // Re-add from scratch to shed the drift of the incremental updates.
    double sum = 0.0, err = 0.0, flo = 0.0;
    for (const auto& p : frozen) {
        sum += p.value;
        err += p.error;
        flo += p.floor;
    }
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        flo += heap.top().floor;
        heap.pop();
    }
    out.value = sum;
    out.abs_error = err;
    out.converged = err <= std::max({tol.abs, tol.rel * std::abs(sum), 2.0 * flo}) || out.converged;
    return out;
}

/// Vector-valued variant: f(x, out) writes `dim` components. All components
/// share the nodes; refinement stops when every component meets its target.
template <class F>
VectorResult integrate_vector(F&& f, std::size_t dim, double a, double b,
                              const Tolerance& tol = {}) {
    struct VPanel {
        double a, b;
        std::vector<double> value, error, floor;
        int depth;
        double priority;
        bool operator<(const VPanel& o) const { return priority < o.priority; }
    };

    std::vector<double> scratch(dim);
    std::vector<std::array<double, 21>> fv(dim);
    auto panel = [&](double lo, double hi, int depth) {
        const double center = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        auto eval_at = [&](double x, std::size_t slot) {
            f(x, std::span<double>(scratch));
            for (std::size_t k = 0; k < dim; ++k) fv[k][slot] = scratch[k];
        };
        for (std::size_t i = 0; i < 10; ++i) {
            const double dx = half * detail::kronrod_nodes[i];
            eval_at(center - dx, 2 * i);
            eval_at(center + dx, 2 * i + 1);
        }
        eval_at(center, 20);
        VPanel p{lo, hi, std::vector<double>(dim), std::vector<double>(dim), std::vector<double>(dim), depth, 0.0};
        for (std::size_t k = 0; k < dim; ++k) {
            const auto& v = fv[k];
            double kr = detail::kronrod_weights[10] * v[20];
            double ga = 0.0;
            double resabs = detail::kronrod_weights[10] * std::abs(v[20]);
            for (std::size_t i = 0; i < 10; ++i) {
                const double pair = v[2 * i] + v[2 * i + 1];
                kr += detail::kronrod_weights[i] * pair;
                resabs += detail::kronrod_weights[i] * (std::abs(v[2 * i]) + std::abs(v[2 * i + 1]));
                if (i % 2 == 1) ga += detail::gauss_weights[i / 2] * pair;
            }
            const double mean = 0.5 * kr;
            double resasc = detail::kronrod_weights[10] * std::abs(v[20] - mean);
            for (std::size_t i = 0; i < 10; ++i) {
                resasc += detail::kronrod_weights[i] *
                          (std::abs(v[2 * i] - mean) + std::abs(v[2 * i + 1] - mean));
            }
            const double h = std::abs(half);
            p.value[k] = kr * half;
            p.error[k] = detail::panel_error(kr, ga, resabs * h, resasc * h, half);
            p.floor[k] = detail::roundoff_floor(resabs * h);
        }
        return p;
    };

    VectorResult out;
    out.value.assign(dim, 0.0);
    out.abs_error.assign(dim, 0.0);
    if (a == b || dim == 0) {
        out.converged = true;
        return out;
    }

    std::vector<double> floor(dim, 0.0);
    auto targets = [&](const std::vector<double>& total) {
        std::vector<double> t(dim);
        for (std::size_t k = 0; k < dim; ++k)
            t[k] = std::max({tol.abs, tol.rel * std::abs(total[k]), 2.0 * floor[k]});
        return t;
    };
    auto rank = [&](VPanel& p, const std::vector<double>& tgt) {
        double pr = 0.0;
        for (std::size_t k = 0; k < dim; ++k) pr = std::max(pr, p.error[k] / tgt[k]);
        p.priority = pr;
    };

    std::priority_queue<VPanel> heap;
    std::vector<VPanel> frozen;
    auto first = panel(a, b, 0);
    out.evaluations = 21;
    std::vector<double> total = first.value, error = first.error;
    floor = first.floor;
    rank(first, targets(total));
    heap.push(std::move(first));

    while (true) {
        const auto tgt = targets(total);
        bool done = true;
        for (std::size_t k = 0; k < dim; ++k) done = done && error[k] <= tgt[k];
        if (done) {
            out.converged = true;
            break;
        }
        if (heap.empty() || static_cast<int>(heap.size() + frozen.size()) >= tol.max_intervals) break;
        auto worst = heap.top();
        heap.pop();
        if (worst.depth >= tol.max_depth) {
            frozen.push_back(std::move(worst));
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = panel(worst.a, mid, worst.depth + 1);
        auto right = panel(mid, worst.b, worst.depth + 1);
        out.evaluations += 42;
        for (std::size_t k = 0; k < dim; ++k) {
            total[k] += left.value[k] + right.value[k] - worst.value[k];
            error[k] += left.error[k] + right.error[k] - worst.error[k];
            floor[k] += left.floor[k] + right.floor[k] - worst.floor[k];
        }
        rank(left, tgt);
        rank(right, tgt);
        heap.push(std::move(left));
        heap.push(std::move(right));
    }

    std::fill(out.value.begin(), out.value.end(), 0.0);
    std::fill(floor.begin(), floor.end(), 0.0);
    auto absorb = [&](const VPanel& p) {
        for (std::size_t k = 0; k < dim; ++k) {
            out.value[k] += p.value[k];
            out.abs_error[k] += p.error[k];
            floor[k] += p.floor[k];
        }
    };
    for (const auto& p : frozen) absorb(p);
    while (!heap.empty()) {
        absorb(heap.top());
        heap.pop();
    }
    if (!out.converged) {
        bool ok = true;
        for (std::size_t k = 0; k < dim; ++k)
            ok = ok && out.abs_error[k] <= std::max({tol.abs, tol.rel * std::abs(out.value[k]), 2.0 * floor[k]});
        out.converged = ok;
    }
    return out;
}

/// Integral of f over (0, inf) computed as the integral of e^x f(e^x) over
/// x in [ln lower, ln upper], extended upward one octave at a time until the
/// last octave contributes below the relative tolerance. `lower` must be
/// small enough that the piece below it is negligible for the integrand.
template <class F>
Result integrate_half_line(F&& f, double lower, double upper, const Tolerance& tol = {},
                           int max_octaves = 200) {
    auto g = [&](double x) {
        const double s = std::exp(x);
        return s * f(s);
    };
    Result r = integrate(g, std::log(lower), std::log(upper), tol);
    double x = std::log(upper);
    for (int k = 0; k < max_octaves; ++k) {
        const double step = std::log(2.0);
        Result piece = integrate(g, x, x + step, tol);
        r.value += piece.value;
        r.abs_error += piece.abs_error;
        r.evaluations += piece.evaluations;
        r.converged = r.converged && piece.converged;
        x += step;
        if (std::abs(piece.value) <= 1e-3 * tol.rel * std::abs(r.value) + 1e-300) break;
    }
    return r;
}

/// Vector-valued integrate_half_line; extension stops once every component's
/// last octave is negligible.
template <class F>
VectorResult integrate_half_line_vector(F&& f, std::size_t dim, double lower, double upper,
                                        const Tolerance& tol = {}, int max_octaves = 200) {
    auto g = [&](double x, std::span<double> out) {
        const double s = std::exp(x);
        f(s, out);
        for (auto& v : out) v *= s;
    };
    VectorResult r = integrate_vector(g, dim, std::log(lower), std::log(upper), tol);
    double x = std::log(upper);
    for (int k = 0; k < max_octaves; ++k) {
        const double step = std::log(2.0);
        VectorResult piece = integrate_vector(g, dim, x, x + step, tol);
        bool small = true;
        for (std::size_t i = 0; i < dim; ++i) {
            r.value[i] += piece.value[i];
            r.abs_error[i] += piece.abs_error[i];
            small = small && std::abs(piece.value[i]) <= 1e-3 * tol.rel * std::abs(r.value[i]) + tol.abs;
        }
        r.evaluations += piece.evaluations;
        r.converged = r.converged && piece.converged;
        x += step;
        if (small) break;
    }
    return r;
}

} // namespace ginibre::quad
