#include "ginibre/telecom.hpp"

#include "ginibre/compensated.hpp"
#include "ginibre/density.hpp"
#include "ginibre/errors.hpp"
#include "ginibre/quadrature.hpp"

#include <cmath>

namespace ginibre {

namespace {

void require_envelope(const EnsembleParams& params, double gamma, const char* what) {
    params.validate();
    if (params.N > kMaxMutualInformationN || params.M > kMaxMutualInformationM) {
        throw DomainError(std::string(what) + ": (N, M) outside the envelope N <= 10, M <= 5");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError(std::string(what) + ": gamma must be positive");
}

} // namespace

double snr_db_to_linear(double gamma_db) { return std::pow(10.0, gamma_db / 10.0); }

QuadratureConfig mutual_information_config() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-15;
    return cfg;
}

double mutual_information_analytic(const EnsembleParams& params, double gamma, const QuadratureConfig& cfg) {
    require_envelope(params, gamma, "mutual_information_analytic");
    const int N = params.N, M = params.M;
    const double z = std::pow(static_cast<double>(N), M) / gamma;
    // The G-function depends on (i, j) only; fold the l-sum into exact
    // rational weights first.
    compensated::Accumulator acc;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            Rational w = 0;
            for (int l = std::max(i, j); l < N; ++l) {
                w += Rational(factorial(l) * factorial(l),
                              factorial(l - j) * factorial(l - i) * factorial(i) * factorial(i) *
                                  power(factorial(j), M + 1));
            }
            if ((i + j) % 2 == 1) w = -w;
            double g;
            try {
                g = meijer_g(MeijerGSpec::mutual_information_form(i, j, M), z, cfg);
            } catch (const NumericalError& e) {
                throw NumericalError(std::string(e.what()) + " [i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                         "]",
                                     e.achieved_error());
            }
            acc.add_product(w.convert_to<double>(), g);
        }
    }
    return acc.value();
}

double mutual_information_quadrature(const EnsembleParams& params, double gamma, const QuadratureConfig& cfg) {
    require_envelope(params, gamma, "mutual_information_quadrature");
    const double scale = std::pow(static_cast<double>(params.N), params.M);
    auto f = [&](double s) { return std::log1p(gamma * s / scale) * density_r1(params, s, cfg); };
    quad::Tolerance tol{std::max(cfg.rel_tol, 1e-12), 1e-300, cfg.max_subdivisions, 4000};
    const quad::Result r = quad::integrate_half_line(f, 1e-14 * scale, 50.0 * scale, tol);
    if (!r.converged) throw NumericalError("mutual_information_quadrature: did not converge", r.abs_error);
    return r.value;
}

std::vector<MISweepRow> mi_sweep(const MIQuery& query, const QuadratureConfig& cfg) {
    if (query.gamma_db_list.empty()) throw DomainError("mi_sweep: empty SNR list");
    std::vector<MISweepRow> rows;
    rows.reserve(query.gamma_db_list.size());
    for (double db : query.gamma_db_list) {
        MISweepRow row;
        row.gamma_db = db;
        try {
            row.mi = mutual_information_analytic(query.params, snr_db_to_linear(db), cfg);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ginibre
