#pragma once

// Ergodic mutual information of the multi-layer scattering MIMO channel whose
// effective channel matrix is P_M.

#include "ginibre/kernels.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ginibre {

/// Envelope of the analytic triple sum in double precision.
inline constexpr int kMaxMutualInformationN = 10;
inline constexpr int kMaxMutualInformationM = 5;

double snr_db_to_linear(double gamma_db);

/// Tighter G-function tolerances for the MI triple sum, whose alternating
/// terms cancel several digits at N = 8.
QuadratureConfig mutual_information_config();

/// E[ln det(I + gamma P P^dagger / N^M)] in nats from the G^{M+2,1}_{2,M+2}
/// triple sum.
double mutual_information_analytic(const EnsembleParams& params, double gamma,
                                   const QuadratureConfig& cfg = mutual_information_config());

/// int_0^inf ln(1 + gamma s / N^M) R1(s) ds by adaptive quadrature.
double mutual_information_quadrature(const EnsembleParams& params, double gamma, const QuadratureConfig& cfg = {});

struct MISweepRow {
    double gamma_db = 0.0;
    std::optional<double> mi; // nats
    std::string error;        // set when mi is empty
};

struct MIQuery {
    EnsembleParams params;
    std::vector<double> gamma_db_list;
};

/// One row per SNR, in input order. A failing point records its error and
/// the sweep continues.
std::vector<MISweepRow> mi_sweep(const MIQuery& query, const QuadratureConfig& cfg = mutual_information_config());

} // namespace ginibre
