// The invariant checks of the validation suite that the acceptance binary
// does not already cover.

#include "ginibre/validation.hpp"

#include <doctest.h>

using namespace ginibre::validation;

namespace {

void expect_pass(CheckResult (*check)(const Options&)) {
    Options opt;
    opt.workers = 4;
    const CheckResult r = check(opt);
    INFO(r.name << ": worst " << r.worst_error << " vs " << r.tolerance << " (" << r.detail << ")");
    CHECK(r.passed);
}

} // namespace

TEST_CASE("laguerre orthogonality") { expect_pass(laguerre_orthogonality); }
TEST_CASE("two-variable biorthogonality") { expect_pass(biorthogonality_two_variable); }
TEST_CASE("chi finite sum against contour form") { expect_pass(chi_forms); }
TEST_CASE("jpdf kernel and Vandermonde routes") { expect_pass(jpdf_routes); }
TEST_CASE("partial-sum residual decreases") { expect_pass(partial_sum_identity); }
TEST_CASE("density triple sum") { expect_pass(density_triple_sum); }
TEST_CASE("density non-negative") { expect_pass(density_nonnegative); }
TEST_CASE("rescaled curves approach the limit") { expect_pass(rescaled_convergence); }
TEST_CASE("general limit law normalization") { expect_pass(limit_general_normalization); }
TEST_CASE("mutual information Jensen bound") { expect_pass(mutual_information_jensen); }
TEST_CASE("mutual information identity route") { expect_pass(mutual_information_identity_route); }
TEST_CASE("Monte Carlo first moments") { expect_pass(monte_carlo_first_moment); }
TEST_CASE("Monte Carlo against Marchenko-Pastur") { expect_pass(monte_carlo_marchenko_pastur); }
TEST_CASE("Monte Carlo determinism") { expect_pass(monte_carlo_determinism); }
TEST_CASE("SIMD equivalence") { expect_pass(simd_equivalence); }

TEST_CASE("identities individually") {
    for (auto* fn : {identity_moment, identity_shift_integral, identity_power_shift, identity_exponential,
                     identity_bessel, identity_logarithm, identity_nested})
        expect_pass(fn);
}
