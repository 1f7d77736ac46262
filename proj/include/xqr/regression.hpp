#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "xqr/data_table.hpp"
#include "xqr/nelder_mead.hpp"

namespace xqr {

/// Variational angles and the scale linking them to regression weights:
/// W_m = -s cos(phi_m) / cos(phi_0).
struct PhaseProgram {
    double response_angle = std::numbers::pi;
    std::vector<double> feature_angles;
    double weight_scale = 1.0;

    std::vector<double> weights() const;

    /// phi_m = arccos(-W_m cos(phi_0) / s); WeightOutOfScale if |W_m| > s |1/cos(phi_0)|.
    static PhaseProgram from_weights(std::span<const double> weights, double weight_scale = 1.0,
                                     double response_angle = std::numbers::pi);

    /// Angles actually programmed on the circuit, response first. The scale is
    /// realized by the response angle: cos(phi_0') = cos(phi_0) / s.
    std::vector<double> circuit_phases() const;
};

enum class CostPath { analytic, quantum_exact, quantum_shots };
enum class Encoder { onehot, binary };

std::string to_string(CostPath path);
std::string to_string(Encoder encoder);
CostPath cost_path_from_string(const std::string& s);
Encoder encoder_from_string(const std::string& s);

struct RegressionConfig {
    double alpha = 0.0;  // L1
    double beta = 0.0;   // L2
    CostPath path = CostPath::analytic;
    Encoder encoder = Encoder::onehot;
    std::size_t shots = 100000;
    double readout_error = 0.0;
    std::optional<double> weight_scale;  // quantum path; auto when unset
    double response_angle = std::numbers::pi;
    std::vector<double> initial_weights;  // empty: zeros
    NelderMeadOptions optimizer;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

struct RegressionModel {
    std::vector<double> weights;
    double cost = 0.0;
    std::vector<double> trace;  // best cost after each NM restart
    double weight_scale = 1.0;
    std::size_t evaluations = 0;

    nlohmann::json to_json() const;
    static RegressionModel from_json(const nlohmann::json& j);
};

/// sum_l (sum_m x_lm W_m - y_l)^2 + alpha |W|_1 + beta |W|_2^2.
double analytic_cost(const DataTable& table, std::span<const double> weights, double alpha = 0.0,
                     double beta = 0.0);

/// Exact <M> of the full circuit: prepare, ancilla |+>, regression map,
/// Hadamard, project the ancilla on |0>, measure.
double pipeline_expectation(const DataTable& normalized_table, std::span<const double> circuit_phases,
                            Encoder encoder);

/// s^2 <M> / cos^2(phi_0) + regularizers, through the selected encoder.
/// Shot mode draws with config.seed.
double quantum_cost(const DataTable& normalized_table, const PhaseProgram& program, const RegressionConfig& config);

/// dC/dphi_m for m = 1..M, with C = s^2 <M> / cos^2(phi_0):
/// -2 sin(phi_m) sum_l x_lm sum_m' x_lm' cos(phi'_m') / cos^2(phi'_0).
std::vector<double> analytic_gradient(const DataTable& table, const PhaseProgram& program);

/// Data cost as a function of the feature angles (for finite differences).
double phase_cost(const DataTable& table, const PhaseProgram& program);

/// Precomputed normal-equation terms; evaluates the analytic cost in O(M^2).
class GramCost {
public:
    explicit GramCost(const DataTable& table);
    double operator()(std::span<const double> weights, double alpha = 0.0, double beta = 0.0) const;
    std::size_t features() const noexcept { return b_.size(); }

private:
    double yy_ = 0.0;
    std::vector<double> b_;  // X^T y
    std::vector<double> g_;  // X^T X, row-major
};

RegressionModel train(const DataTable& table, const RegressionConfig& config);

double predict(std::span<const double> weights, std::span<const double> features);
double predict(const RegressionModel& model, std::span<const double> features);

}  // namespace xqr
