#include "xqr/regression.hpp"

#include <algorithm>
#include <cmath>

#include "xqr/binary.hpp"
#include "xqr/error.hpp"
#include "xqr/onehot.hpp"
#include "xqr/rng.hpp"

namespace xqr {

std::vector<double> PhaseProgram::weights() const {
    const double c0 = std::cos(response_angle);
    std::vector<double> w(feature_angles.size());
    for (std::size_t m = 0; m < w.size(); ++m) w[m] = -weight_scale * std::cos(feature_angles[m]) / c0;
    return w;
}

PhaseProgram PhaseProgram::from_weights(std::span<const double> weights, double weight_scale, double response_angle) {
    if (!(weight_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "weight scale must be positive");
    const double c0 = std::cos(response_angle);
    if (std::abs(c0) < 1e-12) throw Error(ErrorCode::InvalidArgument, "cos(response angle) must be nonzero");
    PhaseProgram p;
    p.response_angle = response_angle;
    p.weight_scale = weight_scale;
    p.feature_angles.resize(weights.size());
    for (std::size_t m = 0; m < weights.size(); ++m) {
        const double c = -weights[m] * c0 / weight_scale;
        if (std::abs(c) > 1.0 + 1e-12) {
            throw Error(ErrorCode::WeightOutOfScale,
                        "weight " + format_double(weights[m]) + " exceeds scale " + format_double(weight_scale));
        }
        p.feature_angles[m] = std::acos(std::clamp(c, -1.0, 1.0));
    }
    return p;
}

std::vector<double> PhaseProgram::circuit_phases() const {
    const double c = std::cos(response_angle) / weight_scale;
    if (std::abs(c) > 1.0 + 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "weight scale " + format_double(weight_scale) +
                                                    " is below |cos(response angle)|");
    }
    std::vector<double> phases;
    phases.reserve(feature_angles.size() + 1);
    phases.push_back(std::acos(std::clamp(c, -1.0, 1.0)));
    phases.insert(phases.end(), feature_angles.begin(), feature_angles.end());
    return phases;
}

std::string to_string(CostPath path) {
    switch (path) {
        case CostPath::analytic: return "analytic";
        case CostPath::quantum_exact: return "quantum-exact";
        case CostPath::quantum_shots: return "quantum-shots";
    }
    return "analytic";
}

std::string to_string(Encoder encoder) { return encoder == Encoder::onehot ? "onehot" : "binary"; }

CostPath cost_path_from_string(const std::string& s) {
    if (s == "analytic") return CostPath::analytic;
    if (s == "quantum-exact") return CostPath::quantum_exact;
    if (s == "quantum-shots") return CostPath::quantum_shots;
    throw Error(ErrorCode::InvalidArgument, "unknown cost path '" + s + "'");
}

Encoder encoder_from_string(const std::string& s) {
    if (s == "onehot") return Encoder::onehot;
    if (s == "binary") return Encoder::binary;
    throw Error(ErrorCode::InvalidArgument, "unknown encoder '" + s + "'");
}

nlohmann::json RegressionConfig::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["cost"] = to_string(path);
    j["encoder"] = to_string(encoder);
    j["shots"] = shots;
    j["readout_error"] = readout_error;
    j["weight_scale"] = weight_scale ? nlohmann::json(*weight_scale) : nlohmann::json("auto");
    j["response_angle"] = response_angle;
    j["initial_weights"] = initial_weights;
    j["optimizer"] = {{"reflection", optimizer.reflection},
                      {"expansion", optimizer.expansion},
                      {"contraction", optimizer.contraction},
                      {"shrink", optimizer.shrink},
                      {"initial_step", optimizer.initial_step},
                      {"restart_tolerance", optimizer.restart_tolerance},
                      {"max_restarts", optimizer.max_restarts}};
    j["seed"] = seed;
    return j;
}

nlohmann::json RegressionModel::to_json() const {
    return {{"weights", weights},
            {"cost", cost},
            {"trace", trace},
            {"weight_scale", weight_scale},
            {"evaluations", evaluations}};
}

RegressionModel RegressionModel::from_json(const nlohmann::json& j) {
    try {
        RegressionModel m;
        m.weights = j.at("weights").get<std::vector<double>>();
        m.cost = j.value("cost", 0.0);
        m.trace = j.value("trace", std::vector<double>{});
        m.weight_scale = j.value("weight_scale", 1.0);
        m.evaluations = j.value("evaluations", std::size_t{0});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
}

namespace {

void check_weights(const DataTable& table, std::span<const double> weights) {
    if (weights.size() != table.features()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(table.features()) + " weights, got " +
                                                      std::to_string(weights.size()));
    }
}

double regularizer(std::span<const double> w, double alpha, double beta) {
    double l1 = 0.0;
    double l2 = 0.0;
    for (double v : w) {
        l1 += std::abs(v);
        l2 += v * v;
    }
    return alpha * l1 + beta * l2;
}

StateVector pipeline_state(const DataTable& table, std::span<const double> phases, Encoder encoder) {
    if (phases.size() != table.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(table.cols()) + " circuit phases");
    }
    if (encoder == Encoder::onehot) {
        const auto layout = onehot_layout_for(table);
        StateVector s = prepare_onehot_table(table);
        s.apply_hadamard(layout.ancilla());
        apply_regression_map_onehot(s, phases, layout);
        s.apply_hadamard(layout.ancilla());
        s.project(layout.ancilla(), Outcome::zero);
        return s;
    }
    const auto layout = binary_layout_for(table);
    StateVector s = prepare_binary_table(table);
    s.apply_hadamard(layout.ancilla());
    apply_regression_map_binary(s, phases, layout);
    s.apply_hadamard(layout.ancilla());
    s.project(layout.ancilla(), Outcome::zero);
    return s;
}

}  // namespace

double analytic_cost(const DataTable& table, std::span<const double> weights, double alpha, double beta) {
    check_weights(table, weights);
    double sse = 0.0;
    for (std::size_t l = 0; l < table.rows(); ++l) {
        const auto row = table.row(l);
        double r = -row[0];
        for (std::size_t m = 0; m < weights.size(); ++m) r += row[m + 1] * weights[m];
        sse += r * r;
    }
    return sse + regularizer(weights, alpha, beta);
}

double pipeline_expectation(const DataTable& table, std::span<const double> phases, Encoder encoder) {
    const StateVector s = pipeline_state(table, phases, encoder);
    if (encoder == Encoder::onehot) return expectation_M_onehot(s, onehot_layout_for(table));
    return expectation_M_binary(s, binary_layout_for(table));
}

double quantum_cost(const DataTable& table, const PhaseProgram& program, const RegressionConfig& config) {
    const auto w = program.weights();
    check_weights(table, w);
    for (double v : w) {
        if (std::abs(v) > program.weight_scale * (1.0 + 1e-12) / std::abs(std::cos(program.response_angle))) {
            throw Error(ErrorCode::WeightOutOfScale, "weight " + format_double(v) + " exceeds the scale");
        }
    }
    const auto phases = program.circuit_phases();
    const double c0 = std::cos(phases[0]);

    double expectation = 0.0;
    if (config.path == CostPath::quantum_shots) {
        const StateVector s = pipeline_state(table, phases, config.encoder);
        const ShotEstimate est =
            config.encoder == Encoder::onehot
                ? sample_shots_onehot(s, config.shots, config.readout_error, config.seed, onehot_layout_for(table))
                : sample_shots_binary(s, config.shots, config.readout_error, config.seed, binary_layout_for(table));
        expectation = est.estimate;
    } else {
        expectation = pipeline_expectation(table, phases, config.encoder);
    }
    return expectation / (c0 * c0) + regularizer(w, config.alpha, config.beta);
}

double phase_cost(const DataTable& table, const PhaseProgram& program) {
    return analytic_cost(table, program.weights());
}

std::vector<double> analytic_gradient(const DataTable& table, const PhaseProgram& program) {
    const std::size_t M = table.features();
    if (program.feature_angles.size() != M) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(M) + " feature angles");
    }
    const auto phases = program.circuit_phases();
    std::vector<double> cosines(phases.size());
    for (std::size_t m = 0; m < phases.size(); ++m) cosines[m] = std::cos(phases[m]);
    const double c0 = cosines[0];

    std::vector<double> grad(M, 0.0);
    for (std::size_t l = 0; l < table.rows(); ++l) {
        const auto row = table.row(l);
        double inner = 0.0;
        for (std::size_t m = 0; m <= M; ++m) inner += row[m] * cosines[m];
        for (std::size_t m = 1; m <= M; ++m) grad[m - 1] += row[m] * inner;
    }
    for (std::size_t m = 1; m <= M; ++m) grad[m - 1] *= -2.0 * std::sin(phases[m]) / (c0 * c0);
    return grad;
}

GramCost::GramCost(const DataTable& table) {
    const std::size_t M = table.features();
    b_.assign(M, 0.0);
    g_.assign(M * M, 0.0);
    for (std::size_t l = 0; l < table.rows(); ++l) {
        const auto row = table.row(l);
        yy_ += row[0] * row[0];
        for (std::size_t i = 0; i < M; ++i) {
            b_[i] += row[i + 1] * row[0];
            for (std::size_t k = i; k < M; ++k) g_[i * M + k] += row[i + 1] * row[k + 1];
        }
    }
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t k = 0; k < i; ++k) g_[i * M + k] = g_[k * M + i];
    }
}

double GramCost::operator()(std::span<const double> w, double alpha, double beta) const {
    const std::size_t M = b_.size();
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double gi = 0.0;
        for (std::size_t k = 0; k < M; ++k) gi += g_[i * M + k] * w[k];
        quad += w[i] * gi;
        lin += w[i] * b_[i];
    }
    return yy_ - 2.0 * lin + quad + regularizer(w, alpha, beta);
}

RegressionModel train(const DataTable& table, const RegressionConfig& config) {
    const std::size_t M = table.features();
    if (M < 1) throw Error(ErrorCode::InvalidShape, "training needs at least one feature");
    if (!(config.alpha >= 0.0) || !(config.beta >= 0.0) || !std::isfinite(config.alpha) ||
        !std::isfinite(config.beta)) {
        throw Error(ErrorCode::InvalidArgument, "regularization strengths must be finite and non-negative");
    }
    std::vector<double> init = config.initial_weights;
    if (init.empty()) init.assign(M, 0.0);
    check_weights(table, init);

    const GramCost gram(table);
    RegressionModel model;

    if (config.path == CostPath::analytic) {
        const auto r = nelder_mead_minimize(
            [&](std::span<const double> w) { return gram(w, config.alpha, config.beta); }, init, config.optimizer);
        model.weights = r.argmin;
        model.cost = r.value;
        model.trace = r.trace;
        model.evaluations = r.evaluations;
        model.weight_scale = 1.0;
        return model;
    }

    double s = 1.0;
    if (config.weight_scale) {
        s = *config.weight_scale;
    } else {
        // Coarse analytic pre-fit to size the weights.
        NelderMeadOptions coarse = config.optimizer;
        coarse.max_restarts = std::min<std::size_t>(coarse.max_restarts, 3);
        const auto pre = nelder_mead_minimize(
            [&](std::span<const double> w) { return gram(w, config.alpha, config.beta); }, init, coarse);
        double wmax = 0.0;
        for (double v : pre.argmin) wmax = std::max(wmax, std::abs(v));
        if (wmax > 1.0) s = 1.25 * wmax;
    }
    const double c0 = std::cos(config.response_angle);
    const double u_limit = 1.0 / std::abs(c0);  // |u_m| = |W_m| / s must keep |cos phi_m| <= 1

    std::vector<double> u(M);
    for (std::size_t m = 0; m < M; ++m) u[m] = std::clamp(init[m] / s, -u_limit, u_limit);

    NelderMeadOptions opt = config.optimizer;
    opt.project = [u_limit](std::vector<double>& x) {
        for (double& v : x) v = std::clamp(v, -u_limit, u_limit);
    };
    std::uint64_t evaluation = 0;
    RegressionConfig eval_config = config;
    const auto r = nelder_mead_minimize(
        [&](std::span<const double> uu) {
            std::vector<double> w(uu.begin(), uu.end());
            for (double& v : w) v *= s;
            const PhaseProgram program = PhaseProgram::from_weights(w, s, config.response_angle);
            eval_config.seed = derive_seed(config.seed, evaluation++);
            return quantum_cost(table, program, eval_config);
        },
        u, opt);
    model.weights = r.argmin;
    for (double& v : model.weights) v *= s;
    model.cost = r.value;
    model.trace = r.trace;
    model.evaluations = r.evaluations;
    model.weight_scale = s;
    return model;
}

double predict(std::span<const double> weights, std::span<const double> features) {
    if (weights.size() != features.size()) {
        throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(features.size()) + " features, model " +
                                                      std::to_string(weights.size()));
    }
    double y = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m) y += weights[m] * features[m];
    return y;
}

double predict(const RegressionModel& model, std::span<const double> features) {
    return predict(model.weights, features);
}

}  // namespace xqr
