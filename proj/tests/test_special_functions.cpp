#include "ginibre/errors.hpp"
#include "ginibre/polynomial.hpp"
#include "ginibre/quadrature.hpp"
#include "ginibre/special_functions.hpp"

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

using namespace ginibre;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Reference values below were computed with mpmath at 30 digits
// (tests/oracles/generate.py).
constexpr double k2K0 = 0.22778774549906687;
constexpr double k2K1 = 0.27973176363304485;

} // namespace

TEST_CASE("log_gamma small integers") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
    CHECK(rel(log_gamma(5.0), std::log(24.0)) < 1e-15);
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("log_gamma against 50-digit reference on [1e-3, 1e6]") {
    using Big = boost::multiprecision::cpp_bin_float_50;
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 1e-3 * std::pow(1e9, i / 400.0);
        const Big ref = boost::math::lgamma(Big(x));
        if (ref == 0) continue;
        const double err = static_cast<double>(abs((Big(log_gamma(x)) - ref) / ref));
        worst = std::max(worst, err);
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("complex log_gamma") {
    struct Case {
        std::complex<double> w;
        double re, im;
    };
    const Case cases[] = {
        {{0.5, 10.0}, -14.789024734744293, 13.03002003491109},
        {{-3.7, 2.0}, -6.7238696924940684, -10.249753986292473},
        {{20.0, -30.0}, 21.345074493863445, -96.71434768953618},
    };
    for (const auto& c : cases) {
        const auto v = log_gamma(c.w);
        CHECK(std::abs(v.real() - c.re) < 1e-13 * std::max(1.0, std::abs(c.re)));
        // imaginary part only matters modulo 2 pi
        const double d = std::remainder(v.imag() - c.im, 2 * std::numbers::pi);
        CHECK(std::abs(d) < 1e-12 * std::max(1.0, std::abs(c.im)));
    }
    // agrees with the real routine on the axis
    for (double x : {0.01, 0.7, 3.0, 40.0, 1e4}) CHECK(std::abs(log_gamma(std::complex<double>(x, 0.0)).real() - log_gamma(x)) < 1e-12 * std::max(1.0, std::abs(log_gamma(x))));
}

TEST_CASE("meijer_g closed forms") {
    CHECK(rel(meijer_g(MeijerGSpec::pure({0.0}), 1.0), std::exp(-1.0)) < 1e-12);
    CHECK(rel(meijer_g(MeijerGSpec::pure({0.0, 0.0}), 1.0), k2K0) < 1e-12);
    // Boost's Bessel K as a second, library-based oracle
    for (auto [b1, b2, z] : {std::tuple{0.0, 0.0, 0.3}, std::tuple{0.0, 1.0, 2.0}, std::tuple{2.0, 0.5, 7.0}}) {
        const double want = 2.0 * std::pow(z, 0.5 * (b1 + b2)) * boost::math::cyl_bessel_k(b1 - b2, 2.0 * std::sqrt(z));
        CHECK(rel(meijer_g(MeijerGSpec::pure({b1, b2}), z), want) < 1e-11);
    }
    const MeijerGSpec log1p_spec{1, 2, {1.0, 1.0}, {1.0, 0.0}};
    for (double z : {0.1, 1.0, 10.0}) CHECK(rel(meijer_g(log1p_spec, z), std::log1p(z)) < 1e-9);
}

TEST_CASE("meijer_g against high-precision references") {
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0}), 1.0), 0.16404160674837607) < 1e-11);
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0, 0}), 2.5), 0.032629156545250209) < 1e-11);
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0, 2}), 0.01), 8.0356243055050505) < 1e-11);
    CHECK(rel(meijer_g(MeijerGSpec::chi_form(3, 2), 2.0), -0.12000620226275103) < 1e-11);
    CHECK(rel(meijer_g(MeijerGSpec::chi_form(5, 3), 0.7), -3.3127631413578013) < 1e-11);
    const auto mi = MeijerGSpec::mutual_information_form(1, 2, 3);
    CHECK(rel(meijer_g(mi, 0.5), 92.002764929357811) < 1e-11);
    CHECK(rel(meijer_g(mi, 64.0), 9.420706716853952) < 1e-11);
    CHECK(rel(meijer_g(mi, 1000.0), 0.83238651670461422) < 1e-11);
}

TEST_CASE("meijer_g nested oracle agreement") {
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0}), 1.0), nested_integral_oracle(3, 0.0, 1.0)) < 1e-8);
    CHECK(rel(nested_integral_oracle(2, 0.0, 1.0), k2K0) < 1e-9);
    CHECK(rel(nested_integral_oracle(2, 1.0, 1.0), k2K1) < 1e-9);
    const double z = 1e-6;
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0}), z), nested_integral_oracle(3, 0.0, z)) < 1e-6);
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0, 0, 1}), 3.0), nested_integral_oracle(4, 1.0, 3.0)) < 1e-8);
}

TEST_CASE("meijer_g diagnostics and errors") {
    const auto r = meijer_g_detailed(MeijerGSpec::pure({0, 0}), 1.0, {}, true);
    CHECK(rel(r.value, k2K0) < 1e-12);
    CHECK(std::abs(r.imag_residual) < 1e-14);
    CHECK(r.abs_error < 1e-10 * r.value);
    CHECK(r.truncation_height > 0.0);

    CHECK_THROWS_AS(meijer_g(MeijerGSpec::pure({0}), 0.0), DomainError);
    CHECK_THROWS_AS(meijer_g(MeijerGSpec::pure({0}), -1.0), DomainError);
    CHECK_THROWS_AS(meijer_g(MeijerGSpec{2, 0, {}, {0.0}}, 1.0), DomainError);
    QuadratureConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(meijer_g(MeijerGSpec::pure({0}), 1.0, bad), DomainError);
    QuadratureConfig off;
    off.contour_offset = 0.5; // right of the b-pole at 0
    CHECK_THROWS_AS(meijer_g(MeijerGSpec::pure({0}), 1.0, off), DomainError);

    // A single bisection level cannot reach 1e-15 on a long contour.
    QuadratureConfig tight;
    tight.rel_tol = 1e-15;
    tight.abs_tol = 1e-300;
    tight.max_subdivisions = 1;
    tight.truncation_height = 400.0;
    try {
        meijer_g(MeijerGSpec::pure({0, 0, 0}), 0.3, tight);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.achieved_error() > 0.0);
    }
}

TEST_CASE("meijer_g fixed contour matches the automatic one") {
    QuadratureConfig cfg;
    cfg.contour_offset = -0.5;
    CHECK(rel(meijer_g(MeijerGSpec::pure({0, 0}), 1.0, cfg), k2K0) < 1e-11);
    const auto mi = MeijerGSpec::mutual_information_form(0, 0, 2);
    cfg.contour_offset = -0.5; // between the a-pole at -1 and the b-pole at 0
    CHECK(rel(meijer_g(mi, 3.0, cfg), meijer_g(mi, 3.0)) < 1e-10);
}

TEST_CASE("power shift") {
    for (double k : {0.5, 1.0, 2.0})
        for (double z : {0.1, 1.0, 5.0}) {
            for (const auto& spec : {MeijerGSpec::pure({0, 0, 1}), MeijerGSpec::chi_form(2, 2),
                                     MeijerGSpec::mutual_information_form(1, 0, 2)}) {
                CHECK(rel(std::pow(z, k) * meijer_g(spec, z), meijer_g(spec.shifted(k), z)) < 1e-10);
            }
        }
}

TEST_CASE("meijer_g_moment") {
    CHECK(meijer_g_moment(std::vector<double>{0, 0}, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(meijer_g_moment(std::vector<double>{0, 0, 0}, 3) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(meijer_g_moment(std::vector<double>{0, 2}, 2) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK_THROWS_AS(meijer_g_moment(std::vector<double>{-1.0, 0.0}, 1), DomainError);
}

TEST_CASE("moment identity by quadrature") {
    for (int m : {2, 3}) {
        std::vector<double> b(m, 0.0);
        b.back() = 1.0;
        const auto spec = MeijerGSpec::pure(b);
        const auto r = quad::integrate_half_line([&](double t) { return t * meijer_g(spec, t); }, 1e-14, 10.0,
                                                 {1e-11, 1e-15});
        CHECK(rel(r.value, meijer_g_moment(b, 2)) < 1e-8);
    }
}

TEST_CASE("bessel_k_integral") {
    for (double nu : {0.0, 1.0, 2.5})
        for (double x : {0.05, 1.0, 30.0}) CHECK(rel(bessel_k_integral(nu, x), boost::math::cyl_bessel_k(nu, x)) < 1e-11);
}

TEST_CASE("monic Laguerre and p polynomials") {
    using V = std::vector<BigInt>;
    CHECK(monic_laguerre(0).coefficients() == V{1});
    CHECK(monic_laguerre(1).coefficients() == V{-1, 1});
    CHECK(monic_laguerre(2).coefficients() == V{2, -4, 1});
    for (int M = 1; M <= 8; ++M) CHECK(p_polynomial(1, M).coefficients() == V{-1, 1});
    CHECK(p_polynomial(2, 2).coefficients() == V{4, -8, 1});
    CHECK(p_polynomial(3, 1).coefficients() == monic_laguerre(3).coefficients());
    CHECK(p_polynomial(2, 2).to_string("s") == "s^2 - 8s + 4");
    // (n!/k!)^{M+1}/(n-k)! at n = 5, k = 2, M = 3
    CHECK(abs(p_polynomial(5, 3).coefficients()[2]) == BigInt(60 * 60 * 60 * 60 / 6));
    for (int n : {0, 7, 60}) CHECK(p_polynomial(n, 4).coefficients().back() == 1);
    CHECK_THROWS_AS(p_polynomial(61, 1), DomainError);
    CHECK_THROWS_AS(p_polynomial(3, 9), DomainError);
}

TEST_CASE("compensated evaluation of an ill-conditioned polynomial") {
    // L~_12 near its largest root cancels about 14 digits in plain Horner.
    const auto L = monic_laguerre(12);
    std::vector<double> x = {0.5, 7.3, 36.0};
    std::vector<double> y(3);
    L.evaluate(x, y);
    const auto exact = [&](double xv) {
        using Big = boost::multiprecision::cpp_bin_float_50;
        Big acc = 0;
        for (auto it = L.coefficients().rbegin(); it != L.coefficients().rend(); ++it)
            acc = acc * Big(xv) + Big(*it);
        return static_cast<double>(acc);
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(rel(y[i], exact(x[i])) < 1e-13);
        CHECK(y[i] == L(x[i]));
    }
}

TEST_CASE("scaled Laguerre recurrence") {
    const auto u = scaled_laguerre_values(10, 3.7);
    for (int n = 0; n < 10; ++n) {
        const double direct = monic_laguerre(n)(3.7) / std::tgamma(n + 1.0);
        CHECK(std::abs(u[n] - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
    }
}
