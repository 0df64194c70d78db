#pragma once

// Self-checks: special-function identities, biorthogonality, normalization,
// moments, Monte Carlo agreement and limit laws. Each check reports its
// worst observed error against a fixed tolerance.

#include "ginibre/special_functions.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ginibre::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst_error = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    double time_limit = 0.0; // 0 = none
    std::string detail;
};

struct Options {
    QuadratureConfig cfg;
    int mc_trials = 100000;
    std::uint64_t seed = 20140601;
    unsigned workers = 1;
    bool monte_carlo = true;
};

// Numbered criteria.
CheckResult andreief_normalization(const Options& opt);
CheckResult density_norm(const Options& opt);
CheckResult moments(const Options& opt);
CheckResult biorthogonality(const Options& opt);
CheckResult reproducing_kernel(const Options& opt);
CheckResult identity_suite(const Options& opt);
CheckResult monte_carlo_histogram(const Options& opt);
CheckResult limit_l1(const Options& opt);
CheckResult mutual_information(const Options& opt);
CheckResult resolvent(const Options& opt);

// Individual identities that identity_suite aggregates.
CheckResult identity_moment(const Options& opt);
CheckResult identity_shift_integral(const Options& opt);
CheckResult identity_power_shift(const Options& opt);
CheckResult identity_exponential(const Options& opt);
CheckResult identity_bessel(const Options& opt);
CheckResult identity_logarithm(const Options& opt);
CheckResult identity_nested(const Options& opt);

// Further invariants.
CheckResult laguerre_orthogonality(const Options& opt);
CheckResult biorthogonality_two_variable(const Options& opt);
CheckResult chi_forms(const Options& opt);
CheckResult jpdf_routes(const Options& opt);
CheckResult partial_sum_identity(const Options& opt);
CheckResult density_triple_sum(const Options& opt);
CheckResult density_nonnegative(const Options& opt);
CheckResult rescaled_convergence(const Options& opt);
CheckResult limit_general_normalization(const Options& opt);
CheckResult mutual_information_jensen(const Options& opt);
CheckResult mutual_information_identity_route(const Options& opt);
CheckResult monte_carlo_first_moment(const Options& opt);
CheckResult monte_carlo_marchenko_pastur(const Options& opt);
CheckResult monte_carlo_determinism(const Options& opt);
CheckResult simd_equivalence(const Options& opt);

/// Everything above, in a fixed order. Monte Carlo checks are skipped when
/// opt.monte_carlo is false.
std::vector<CheckResult> run_all(const Options& opt);

} // namespace ginibre::validation
