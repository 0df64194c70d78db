#include "ginibre/density.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/quadrature.hpp"

#include <doctest.h>

#include <boost/math/special_functions/laguerre.hpp>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace ginibre;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double rescaled_integral(const EnsembleParams& p, int power) {
    return quad::integrate_half_line([&](double x) { return std::pow(x, power) * rescaled_density(p, x); }, 1e-16,
                                     10.0, {1e-10, 1e-14})
        .value;
}

} // namespace

TEST_CASE("density_r1 values") {
    CHECK(rel(density_r1({1, 1}, 2.0), std::exp(-2.0)) < 1e-14);
    // Wishart-Laguerre density from Boost's classical Laguerre polynomials
    for (double s : {0.05, 1.0, 3.3, 12.0, 30.0}) {
        double want = 0.0;
        for (unsigned j = 0; j < 4; ++j) want += std::pow(boost::math::laguerre(j, s), 2);
        want *= std::exp(-s);
        CHECK(rel(density_r1({4, 1}, s), want) < 1e-9);
    }
    // frozen 30-digit references
    CHECK(rel(density_r1({2, 2}, 1.0), 0.22778774549906687) < 1e-10);
    CHECK(rel(density_r1({3, 3}, 0.3), 0.62504387154348604) < 1e-10);
    CHECK(rel(density_r1({4, 2}, 20.0), 0.033510238814211658) < 1e-10);
    for (double s : {0.5, 5.0, 50.0}) CHECK(rel(density_r1_triple_sum({3, 2}, s), density_r1({3, 2}, s)) < 1e-8);
    CHECK_THROWS_AS(density_r1({2, 2}, 0.0), DomainError);
}

TEST_CASE("density normalization") {
    CHECK(std::abs(moment_numeric({4, 2}, 0).value - 1.0) < 1e-6);
    CHECK(std::abs(moment_numeric({3, 3}, 0).value - 1.0) < 1e-6);
}

TEST_CASE("density is non-negative") {
    for (const EnsembleParams p : {EnsembleParams{2, 1}, EnsembleParams{4, 2}, EnsembleParams{3, 3}}) {
        const double top = 10.0 * std::pow(p.N, p.M);
        for (int i = 0; i <= 80; ++i) {
            const double s = 1e-3 * std::pow(top / 1e-3, i / 80.0);
            CHECK(density_r1(p, s) >= -1e-12);
        }
    }
}

TEST_CASE("exact moments") {
    CHECK(moment_exact({4, 3}, 1) == 64);
    CHECK(moment_exact({2, 2}, 2) == 52);
    CHECK(moment_exact({2, 3}, 2) == 320);
    for (int N = 1; N <= 6; ++N)
        for (int M = 1; M <= 4; ++M) {
            CHECK(moment_exact({N, M}, 0) == 1);
            CHECK(moment_exact({N, M}, 1) == Rational(power(BigInt(N), M)));
            for (int k = 2; k <= 5; ++k) CHECK(moment_exact({N, M}, k) == moment_exact_triple_sum({N, M}, k));
        }
    CHECK(moment_closed({2, 2}, 2) == 52.0);
    CHECK_THROWS_AS(moment_exact({13, 1}, 1), DomainError);
    CHECK_THROWS_AS(moment_exact({2, 2}, -1), DomainError);
}

TEST_CASE("numerical moments") {
    CHECK(rel(moment_numeric({3, 2}, 1).value, 9.0) < 1e-6);
    CHECK(rel(moment_numeric({2, 3}, 2).value, 320.0) < 1e-6);
    CHECK(std::abs(moment_numeric({2, 2}, 0).value - 1.0) < 1e-8);
    const MomentEstimate e = moment_numeric({3, 2}, 3);
    CHECK(e.abs_error < 1e-6 * e.value);
    CHECK(rel(e.value, moment_closed({3, 2}, 3)) < 1e-6);
}

TEST_CASE("rescaled density") {
    CHECK(std::abs(rescaled_integral({4, 2}, 1) - 1.0) < 1e-6);
    CHECK(std::abs(rescaled_integral({3, 3}, 0) - 1.0) < 1e-6);
    CHECK(std::abs(rescaled_density({10, 1}, 2.0) - mp_density(2.0)) < 0.05);
}

TEST_CASE("limit laws") {
    CHECK(limit_support_upper(1) == 4.0);
    CHECK(limit_support_upper(2) == 6.75);
    CHECK(mp_density(4.0) == 0.0);
    CHECK(mp_density(5.0) == 0.0);
    CHECK(rel(mp_density(2.0), 1.0 / (2 * std::numbers::pi)) < 1e-15);
    CHECK(std::abs(integrate_limit_law(mp_density, 1, 0) - 1.0) < 1e-8);

    CHECK(std::abs(limit_density_m2(6.75 + 0.5)) < 1e-6);
    CHECK(limit_density_m2(6.75 - 1e-6) < 1e-2);
    const auto m2 = [](double x) { return limit_density_m2(x); };
    CHECK(std::abs(integrate_limit_law(m2, 2, 0) - 1.0) < 1e-4);
    CHECK(std::abs(integrate_limit_law(m2, 2, 1) - 1.0) < 1e-4);
    // x^{2/3} rho(x) settles towards sin(pi/3)/pi at the origin
    const double c = std::sin(std::numbers::pi / 3) / std::numbers::pi;
    double prev = 1.0;
    for (double x : {1e-4, 1e-5, 1e-6}) {
        const double d = std::abs(std::pow(x, 2.0 / 3.0) * limit_density_m2(x) - c);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-2 * c);
    CHECK_THROWS_AS(limit_density_m2(1.0, 0.0), DomainError);
}

TEST_CASE("general resolvent") {
    for (double x : {0.5, 2.0, 3.9}) CHECK(rel(limit_density_general(1, x), mp_density(x)) < 1e-5);
    for (double x : {0.5, 2.0, 6.0}) CHECK(rel(limit_density_general(2, x), limit_density_m2(x)) < 1e-5);
    for (int M = 1; M <= 6; ++M) {
        const auto rho = [M](double x) { return limit_density_general(M, x); };
        CHECK(std::abs(integrate_limit_law(rho, M, 0) - 1.0) < 1e-4);
        CHECK(std::abs(integrate_limit_law(rho, M, 1) - 1.0) < 1e-4);
        CHECK(limit_density_general(M, limit_support_upper(M) + 0.1) == 0.0);
        // origin singularity x^{-M/(M+1)} survives down to tiny x
        const double a = std::pow(1e-20, M / (M + 1.0)) * limit_density_general(M, 1e-20);
        const double b = std::pow(1e-24, M / (M + 1.0)) * limit_density_general(M, 1e-24);
        CHECK(rel(a, b) < 1e-2);
    }
    CHECK_THROWS_AS(limit_density_general(7, 1.0), DomainError);
    CHECK_THROWS_AS(limit_density_general(0, 1.0), DomainError);
}

TEST_CASE("density curve is independent of the worker count") {
    std::vector<double> grid;
    for (int i = 1; i <= 37; ++i) grid.push_back(0.3 * i);
    const auto a = density_curve({3, 2}, grid, false, {}, 1);
    const auto b = density_curve({3, 2}, grid, false, {}, 4);
    REQUIRE(a.values.size() == grid.size());
    CHECK(std::memcmp(a.values.data(), b.values.data(), grid.size() * sizeof(double)) == 0);
    const auto r = density_curve({3, 2}, grid, true);
    CHECK(r.first_moment_used == 9.0);
    CHECK(r.values[4] == rescaled_density({3, 2}, grid[4]));
}
