#include "ginibre/density.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/montecarlo.hpp"
#include "ginibre/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

using namespace ginibre;

TEST_CASE("samples are well formed") {
    const auto b = sample_squared_singular_values({5, 3}, 200, 11);
    REQUIRE(b.samples.size() == 200u * 5u);
    for (int t = 0; t < b.trials; ++t) {
        const auto r = b.row(t);
        CHECK(std::is_sorted(r.begin(), r.end(), std::greater<>()));
        CHECK(r.back() >= 0.0);
    }
    CHECK(b.warnings.empty());
    CHECK(sample_squared_singular_values({2, 8}, 3, 1).warnings.size() == 1);
    CHECK_THROWS_AS(sample_squared_singular_values({2, 2}, 0, 1), DomainError);
    CHECK_THROWS_AS(sample_squared_singular_values({65, 1}, 1, 1), DomainError);
}

TEST_CASE("determinism") {
    const auto a = sample_squared_singular_values({4, 2}, 300, 99, 1);
    const auto b = sample_squared_singular_values({4, 2}, 300, 99, 1);
    const auto c = sample_squared_singular_values({4, 2}, 300, 99, 5);
    const auto d = sample_squared_singular_values({4, 2}, 300, 100, 1);
    CHECK(std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.samples.data(), c.samples.data(), a.samples.size() * sizeof(double)) == 0);
    CHECK(a.samples != d.samples);
    // a prefix of a longer run is the shorter run
    const auto e = sample_squared_singular_values({4, 2}, 100, 99, 3);
    CHECK(std::equal(e.samples.begin(), e.samples.end(), a.samples.begin()));
}

TEST_CASE("exponential law at N = M = 1") {
    const auto b = sample_squared_singular_values({1, 1}, 100000, 3, 4);
    CHECK(std::abs(estimate_moment(b, 1).mean - 1.0) < 0.01);
}

TEST_CASE("first moment N^M") {
    const auto b = sample_squared_singular_values({4, 3}, 100000, 5, 4);
    const auto e = estimate_moment(b, 1);
    CHECK(e.stderr_ > 0.0);
    CHECK(std::abs(e.mean - 64.0) < 3.0 * e.stderr_);
}

TEST_CASE("moments at N = M = 2") {
    const auto b = sample_squared_singular_values({2, 2}, 100000, 8, 4);
    const auto m0 = estimate_moment(b, 0);
    CHECK(m0.mean == 1.0);
    CHECK(m0.stderr_ == 0.0);
    const auto m1 = estimate_moment(b, 1);
    CHECK(std::abs(m1.mean - 4.0) < 3.0 * m1.stderr_);
    const auto m2 = estimate_moment(b, 2);
    CHECK(std::abs(m2.mean - 52.0) < 3.0 * m2.stderr_);
    CHECK_THROWS_AS(estimate_moment(b, 7), DomainError);
}

TEST_CASE("histogram bookkeeping") {
    const auto b = sample_squared_singular_values({3, 2}, 2000, 4);
    const auto h = estimate_density_histogram(b, {0.0, 1.0, 5.0, 20.0});
    double mass = 0.0;
    for (std::size_t i = 0; i < h.density.size(); ++i) {
        CHECK(h.density[i] >= 0.0);
        mass += h.density[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
    }
    CHECK(std::abs(mass - h.total_mass) < 1e-12);
    CHECK(std::abs(h.total_mass + h.out_of_range_mass - 3.0) < 1e-12);
    CHECK(h.out_of_range_count > 0);
    CHECK_THROWS_AS(estimate_density_histogram(b, {1.0}), DomainError);
    CHECK_THROWS_AS(estimate_density_histogram(b, {1.0, 1.0}), DomainError);
    SampleBatch empty;
    CHECK_THROWS_AS(estimate_density_histogram(empty, {0.0, 1.0}), DomainError);
}

TEST_CASE("histogram against the analytic density") {
    const EnsembleParams p{4, 2};
    const auto b = sample_squared_singular_values(p, 100000, 2014, 4);
    std::vector<double> edges;
    for (int i = 0; i <= 40; ++i) edges.push_back(2.5 * i);
    const auto h = estimate_density_histogram(b, edges);
    int occupied = 0, ok = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (h.counts[i] == 0) continue;
        ++occupied;
        const double lo = std::max(edges[i], 1e-14);
        const double mass = quad::integrate(
                                [&](double x) {
                                    const double s = std::exp(x);
                                    return s * density_r1(p, s);
                                },
                                std::log(lo), std::log(edges[i + 1]), {1e-9, 1e-13})
                                .value;
        const double want = mass / (edges[i + 1] - edges[i]);
        if (std::abs(h.density[i] - want) <= 4.0 * h.stderr_[i]) ++ok;
    }
    CHECK(ok >= 0.95 * occupied);
}

TEST_CASE("mutual information estimator") {
    const auto b = sample_squared_singular_values({2, 3}, 5000, 21);
    CHECK(estimate_mutual_information(b, -100.0).mean < 1e-8);
    CHECK(estimate_mutual_information(b, 20.0).mean > estimate_mutual_information(b, 10.0).mean);
    CHECK(estimate_mutual_information(b, 10.0).stderr_ > 0.0);
}

TEST_CASE("batch CSV") {
    const auto b = sample_squared_singular_values({2, 1}, 2, 5);
    std::ostringstream os;
    write_batch_csv(b, os);
    const std::string out = os.str();
    CHECK(out.rfind("# ginibre simulate schema=1 N=2 M=1 trials=2 seed=5\ntrial,s_1,s_2\n0,", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 4);
}
