#include "ginibre/errors.hpp"
#include "ginibre/montecarlo.hpp"
#include "ginibre/telecom.hpp"

#include <doctest.h>

#include <cmath>

using namespace ginibre;

namespace {
double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }
} // namespace

TEST_CASE("dB conversion") {
    CHECK(snr_db_to_linear(0.0) == 1.0);
    CHECK(snr_db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(snr_db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("analytic mutual information") {
    CHECK(mutual_information_analytic({2, 3}, 1e-9) < 1e-7);
    // frozen 30-digit references from quadrature of ln(1 + gamma s/N^M) R1(s)
    CHECK(rel(mutual_information_analytic({2, 3}, 10.0), 2.8016535897094001) < 1e-9);
    CHECK(rel(mutual_information_analytic({4, 3}, 1.0), 1.8482439659970251) < 1e-9);
    CHECK(rel(mutual_information_analytic({2, 3}, 10.0), mutual_information_quadrature({2, 3}, 10.0)) < 1e-5);
    CHECK_THROWS_AS(mutual_information_analytic({11, 2}, 1.0), DomainError);
    CHECK_THROWS_AS(mutual_information_analytic({2, 6}, 1.0), DomainError);
    CHECK_THROWS_AS(mutual_information_analytic({2, 2}, 0.0), DomainError);
}

TEST_CASE("identity route against quadrature") {
    for (const EnsembleParams p : {EnsembleParams{2, 2}, EnsembleParams{2, 3}, EnsembleParams{3, 2}})
        for (double g : {1.0, 10.0})
            CHECK(rel(mutual_information_analytic(p, g), mutual_information_quadrature(p, g)) < 1e-5);
}

TEST_CASE("Jensen bound") {
    for (const EnsembleParams p : {EnsembleParams{1, 1}, EnsembleParams{2, 3}, EnsembleParams{5, 2}})
        for (double g : {0.5, 10.0, 1000.0}) CHECK(mutual_information_analytic(p, g) <= p.N * std::log1p(g));
}

TEST_CASE("Monte Carlo agreement at N = 4, M = 3") {
    const EnsembleParams p{4, 3};
    const auto b = sample_squared_singular_values(p, 100000, 77, 4);
    const auto e = estimate_mutual_information(b, 10.0);
    CHECK(std::abs(e.mean - mutual_information_analytic(p, 10.0)) < 3.0 * e.stderr_);
}

TEST_CASE("sweeps") {
    const auto rows = mi_sweep({{2, 3}, {0.0, 10.0, 20.0}});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) REQUIRE(r.mi.has_value());
    CHECK(*rows[0].mi < *rows[1].mi);
    CHECK(*rows[1].mi < *rows[2].mi);
    const auto single = mi_sweep({{3, 2}, {7.0}});
    CHECK(*single[0].mi == mutual_information_analytic({3, 2}, snr_db_to_linear(7.0)));
    for (double db : {0.0, 10.0, 20.0}) {
        const double g = snr_db_to_linear(db);
        const double m2 = mutual_information_analytic({2, 3}, g);
        const double m4 = mutual_information_analytic({4, 3}, g);
        const double m8 = mutual_information_analytic({8, 3}, g);
        CHECK(m8 > m4);
        CHECK(m4 > m2);
    }
    CHECK_THROWS_AS(mi_sweep({{2, 3}, {}}), DomainError);
}
