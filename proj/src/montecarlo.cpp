#include "ginibre/montecarlo.hpp"

#include "ginibre/csv.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/simd.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>

namespace ginibre {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256**, seeded through splitmix64.
class Xoshiro {
public:
    explicit Xoshiro(std::uint64_t seed) {
        for (auto& w : s_) w = splitmix64(seed);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // (0, 1]
    double uniform_open0() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt) {
    std::uint64_t x = seed;
    std::uint64_t k = splitmix64(x) ^ (trial * 0xd1b54a32d192ed03ULL);
    k = splitmix64(k) ^ (attempt * 0x8cb92ba72f3d8dd7ULL);
    return splitmix64(k);
}

// Standard complex normal, E|x|^2 = 1: sqrt(-ln U) e^{i theta}.
void fill_gaussian(Xoshiro& rng, std::vector<double>& m) {
    for (std::size_t i = 0; i < m.size(); i += 2) {
        const double r = std::sqrt(-std::log(rng.uniform_open0()));
        const double theta = 2.0 * std::numbers::pi * rng.uniform_open0();
        m[i] = r * std::cos(theta);
        m[i + 1] = r * std::sin(theta);
    }
}

bool sample_trial(const EnsembleParams& params, std::uint64_t key, std::span<double> out) {
    const int N = params.N;
    const std::size_t n2 = 2 * static_cast<std::size_t>(N) * N;
    Xoshiro rng(key);
    std::vector<double> p(n2), x(n2), c(n2);
    fill_gaussian(rng, p);
    for (int j = 1; j < params.M; ++j) {
        fill_gaussian(rng, x);
        std::fill(c.begin(), c.end(), 0.0);
        simd::cgemm_accumulate(static_cast<std::size_t>(N), x.data(), p.data(), c.data());
        std::swap(p, c);
    }
    using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> pm(reinterpret_cast<const std::complex<double>*>(p.data()), N, N);
    const double norm = pm.norm();
    if (!std::isfinite(norm) || norm == 0.0) return false;
    const Eigen::MatrixXcd gram = pm * pm.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    const auto& ev = es.eigenvalues();
    for (int a = 0; a < N; ++a) {
        const double v = ev(N - 1 - a);
        if (!std::isfinite(v)) return false;
        out[static_cast<std::size_t>(a)] = std::max(0.0, v);
    }
    return true;
}

void require_nonempty(const SampleBatch& batch, const char* what) {
    if (batch.trials < 1 || batch.samples.empty()) throw DomainError(std::string(what) + ": empty batch");
}

MeanEstimate mean_and_stderr(const std::vector<double>& v) {
    MeanEstimate r;
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    r.mean = mean;
    r.stderr_ = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return r;
}

} // namespace

SampleBatch sample_squared_singular_values(const EnsembleParams& params, int trials, std::uint64_t seed,
                                           unsigned workers) {
    params.validate();
    if (trials < 1) throw DomainError("sample_squared_singular_values: trials must be >= 1");
    if (params.N > 64) throw DomainError("sample_squared_singular_values: N must be <= 64");
    SampleBatch batch;
    batch.params = params;
    batch.trials = trials;
    batch.seed = seed;
    batch.samples.assign(static_cast<std::size_t>(trials) * params.N, 0.0);
    if (params.M >= 8) {
        batch.warnings.push_back("M >= 8: entries of P_M span a dynamic range growing like N^{M/2}");
    }
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(trials)));
    std::vector<int> retried(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned w, int begin, int end) {
        try {
            for (int t = begin; t < end; ++t) {
                std::span<double> out(batch.samples.data() + static_cast<std::size_t>(t) * params.N,
                                      static_cast<std::size_t>(params.N));
                if (sample_trial(params, stream_key(seed, static_cast<std::uint64_t>(t), 0), out)) continue;
                ++retried[w];
                if (!sample_trial(params, stream_key(seed, static_cast<std::uint64_t>(t), 1), out)) {
                    throw NumericalError("sample_squared_singular_values: trial " + std::to_string(t) +
                                             " failed twice",
                                         std::numeric_limits<double>::infinity());
                }
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    const int chunk = (trials + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    if (workers == 1) {
        run(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const int b = static_cast<int>(w) * chunk;
            const int e = std::min(trials, b + chunk);
            pool.emplace_back(run, w, b, e);
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (int r : retried) batch.retried_trials += r;
    return batch;
}

HistogramEstimate estimate_density_histogram(const SampleBatch& batch, std::vector<double> bin_edges) {
    require_nonempty(batch, "estimate_density_histogram");
    if (bin_edges.size() < 2) throw DomainError("estimate_density_histogram: need at least two edges");
    for (std::size_t i = 1; i < bin_edges.size(); ++i) {
        if (!(bin_edges[i] > bin_edges[i - 1])) {
            throw DomainError("estimate_density_histogram: edges must be strictly increasing");
        }
    }
    HistogramEstimate h;
    h.bin_edges = std::move(bin_edges);
    const std::size_t bins = h.bin_edges.size() - 1;
    h.counts.assign(bins, 0);
    for (double s : batch.samples) {
        if (s < h.bin_edges.front() || s >= h.bin_edges.back()) {
            ++h.out_of_range_count;
            continue;
        }
        const auto it = std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), s);
        ++h.counts[static_cast<std::size_t>(it - h.bin_edges.begin()) - 1];
    }
    const double trials = batch.trials;
    const double total = static_cast<double>(batch.samples.size());
    h.density.resize(bins);
    h.stderr_.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double width = h.bin_edges[b + 1] - h.bin_edges[b];
        const double c = static_cast<double>(h.counts[b]);
        const double p = c / total;
        h.density[b] = c / (trials * width);
        h.stderr_[b] = std::sqrt(total * p * (1.0 - p)) / (trials * width);
        h.total_mass += c / trials;
    }
    h.out_of_range_mass = static_cast<double>(h.out_of_range_count) / trials;
    return h;
}

MeanEstimate estimate_moment(const SampleBatch& batch, int k) {
    require_nonempty(batch, "estimate_moment");
    if (k < 0 || k > 6) throw DomainError("estimate_moment: k must be in [0, 6]");
    if (k == 0) return {1.0, 0.0};
    std::vector<double> per_trial(static_cast<std::size_t>(batch.trials));
    for (int t = 0; t < batch.trials; ++t) {
        double acc = 0.0;
        for (double s : batch.row(t)) acc += std::pow(s, k);
        per_trial[static_cast<std::size_t>(t)] = acc / batch.params.N;
    }
    return mean_and_stderr(per_trial);
}

MIEstimate estimate_mutual_information(const SampleBatch& batch, double gamma_db) {
    require_nonempty(batch, "estimate_mutual_information");
    const double gamma = std::pow(10.0, gamma_db / 10.0);
    const double scale = gamma / std::pow(static_cast<double>(batch.params.N), batch.params.M);
    std::vector<double> per_trial(static_cast<std::size_t>(batch.trials));
    for (int t = 0; t < batch.trials; ++t) {
        double acc = 0.0;
        for (double s : batch.row(t)) acc += std::log1p(scale * s);
        per_trial[static_cast<std::size_t>(t)] = acc;
    }
    const MeanEstimate m = mean_and_stderr(per_trial);
    return {gamma_db, m.mean, m.stderr_, batch.trials};
}

void write_batch_csv(const SampleBatch& batch, std::ostream& os) {
    os << "# ginibre simulate schema=" << csv::kSchemaVersion << " N=" << batch.params.N << " M=" << batch.params.M
       << " trials=" << batch.trials << " seed=" << batch.seed << "\n";
    os << "trial";
    for (int a = 1; a <= batch.params.N; ++a) os << ",s_" << a;
    os << "\n";
    for (int t = 0; t < batch.trials; ++t) {
        os << t;
        for (double s : batch.row(t)) os << "," << csv::num(s);
        os << "\n";
    }
}

} // namespace ginibre
