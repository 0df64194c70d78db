#pragma once

// Error-free transformations and the twice-working-precision sum and dot
// product built from them (Ogita, Rump, Oishi).

#include <cmath>
#include <cstddef>
#include <span>

namespace ginibre::compensated {

struct Pair {
    double value;
    double error;
};

inline Pair two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Pair two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

class Accumulator {
public:
    void add(double x) {
        const Pair r = two_sum(sum_, x);
        sum_ = r.value;
        err_ += r.error;
    }
    void add_product(double a, double b) {
        const Pair p = two_prod(a, b);
        add(p.value);
        err_ += p.error;
    }
    double value() const { return sum_ + err_; }

private:
    double sum_ = 0.0;
    double err_ = 0.0;
};

inline double sum(std::span<const double> x) {
    Accumulator acc;
    for (double v : x) acc.add(v);
    return acc.value();
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    Accumulator acc;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) acc.add_product(a[i], b[i]);
    return acc.value();
}

} // namespace ginibre::compensated
