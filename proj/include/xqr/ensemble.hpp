#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "xqr/data_table.hpp"
#include "xqr/regression.hpp"

namespace xqr {

struct EnsembleOptions {
    std::size_t batches = 1024;  // N_b
    std::size_t batch_size = 150;
    StandardizationMode standardization = StandardizationMode::per_batch;
    std::uint64_t seed = 0;
    std::size_t workers = 0;  // 0: XQR_WORKERS or hardware concurrency
    bool force_identical_batches = false;  // every batch reuses batch 0's draw
};

/// Weights are in raw units of the master table. SE is the ensemble
/// standard deviation (ddof 1), not divided by sqrt(N_b).
struct EnsembleReport {
    std::size_t batches = 0;
    std::size_t batch_size = 0;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::vector<double> t_statistic;  // +inf (signed) when SE = 0
    std::vector<std::vector<double>> batch_weights;
    std::vector<double> duplicate_fraction;

    nlohmann::json to_json() const;
};

inline constexpr double kInfiniteT = std::numeric_limits<double>::infinity();

EnsembleReport train_ensemble(const DataTable& master, const RegressionConfig& config, const EnsembleOptions& options);

/// Worker count: XQR_WORKERS if set and positive, else hardware concurrency (at least 1).
std::size_t default_workers();

/// Pr_0 = cos^2(phi_y) sigma_y^2 / (sigma_y^2 + sum_m sigma_m^2), sigma^2 the
/// column sums of squares about the mean.
double success_probability_null(const DataTable& table, double response_angle = std::numbers::pi);

/// G_M = 1 - Pr_M / Pr_0.
double goodness(double pr_model, double pr_null);

/// ceil(1 / (Pr_0 (1 - delta_eps))).
std::size_t minimal_shots(double pr_null, double delta_eps);

/// one-hot: L(M+1) delta; binary: (ceil log2 L + ceil log2 (M+1)) delta.
double readout_error_budget(Encoder encoding, std::size_t rows, std::size_t features, double delta);

}  // namespace xqr
