#pragma once

// Direct sampling of P_M = X_M ... X_1 with complex Gaussian factors, and the
// empirical estimators built on the squared singular values.

#include "ginibre/kernels.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ginibre {

struct SampleBatch {
    EnsembleParams params;
    int trials = 0;
    std::uint64_t seed = 0;
    /// trials x N, row-major; each row sorted descending.
    std::vector<double> samples;
    /// Eigensolver or norm-check failures that were recovered by a retry.
    int retried_trials = 0;
    std::vector<std::string> warnings;

    std::span<const double> row(int trial) const {
        return {samples.data() + static_cast<std::size_t>(trial) * params.N, static_cast<std::size_t>(params.N)};
    }
};

/// Each trial draws from its own stream keyed by (seed, trial, attempt), so
/// the batch is identical for any number of workers.
SampleBatch sample_squared_singular_values(const EnsembleParams& params, int trials, std::uint64_t seed,
                                           unsigned workers = 1);

struct HistogramEstimate {
    std::vector<double> bin_edges;
    std::vector<double> density;
    std::vector<double> stderr_;
    std::vector<long long> counts;
    /// Sum of density * width; equals N minus out_of_range_mass.
    double total_mass = 0.0;
    double out_of_range_mass = 0.0;
    long long out_of_range_count = 0;
};

/// Density per unit s normalized to total mass N; binomial standard errors.
HistogramEstimate estimate_density_histogram(const SampleBatch& batch, std::vector<double> bin_edges);

struct MeanEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean over trials of (1/N) sum_a s_a^k, 0 <= k <= 6.
MeanEstimate estimate_moment(const SampleBatch& batch, int k);

struct MIEstimate {
    double gamma_db = 0.0;
    double mean = 0.0; // nats/s/Hz
    double stderr_ = 0.0;
    int trials = 0;
};

/// Mean over trials of sum_a ln(1 + gamma s_a / N^M).
MIEstimate estimate_mutual_information(const SampleBatch& batch, double gamma_db);

/// One row per trial: trial index then s_1..s_N.
void write_batch_csv(const SampleBatch& batch, std::ostream& os);

} // namespace ginibre
