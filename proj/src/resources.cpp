#include "xqr/resources.hpp"

#include "xqr/error.hpp"

namespace xqr {

std::string to_string(GateModel gates) { return gates == GateModel::global ? "global" : "local"; }

GateModel gate_model_from_string(const std::string& s) {
    if (s == "global") return GateModel::global;
    if (s == "local") return GateModel::local;
    throw Error(ErrorCode::InvalidArgument, "unknown gate model '" + s + "'");
}

nlohmann::json ResourceEstimate::to_json() const {
    return {{"encoding", to_string(encoding)},
            {"gate_model", to_string(gates)},
            {"L", rows},
            {"M", features},
            {"N_P", precision_bits},
            {"qubits", qubits},
            {"prep_gates", prep_gates},
            {"map_gates", map_gates},
            {"measurement_terms", measurement_terms},
            {"prep_complexity", prep_complexity},
            {"map_complexity", map_complexity}};
}

ResourceEstimate estimate(Encoder encoding, std::size_t rows, std::size_t features, const ResourceOptions& options) {
    if (rows < 1 || features < 1) throw Error(ErrorCode::InvalidShape, "resource estimates need L >= 1 and M >= 1");
    ResourceEstimate e;
    e.encoding = encoding;
    e.gates = options.gates;
    e.rows = rows;
    e.features = features;
    const std::size_t C = features + 1;
    const std::size_t K = rows * C;

    if (encoding == Encoder::onehot) {
        if (options.columns_per_pulse < 1) throw Error(ErrorCode::InvalidShape, "columns_per_pulse must be >= 1");
        e.qubits = K + 1;
        e.prep_gates = K - 1;
        e.map_gates = options.gates == GateModel::local ? 3 * K : (C + options.columns_per_pulse - 1) / options.columns_per_pulse;
        e.measurement_terms = 1 + rows * features * C;
        e.prep_complexity = "O(LM)";
        e.map_complexity = options.gates == GateModel::local ? "O(LM)" : "O(M)";
        return e;
    }

    if (options.precision_bits < 1) throw Error(ErrorCode::InvalidShape, "binary encoding needs N_P >= 1");
    e.precision_bits = options.precision_bits;
    const std::size_t NL = ceil_log2(rows);
    const std::size_t NM = ceil_log2(C);
    const std::size_t NK = NL + NM;
    const std::size_t keyspace = std::size_t{1} << NK;
    const std::size_t colspace = std::size_t{1} << NM;

    e.qubits = NK + 1 + (options.count_memory_qubits ? K * options.precision_bits : 0);
    std::size_t prep = K * keyspace;
    if (options.memory == MemoryModel::quantum) prep *= options.precision_bits;
    std::size_t map = colspace * C;
    if (options.gates == GateModel::local) {
        prep *= NK + 1;
        map *= NM + 1;
    }
    e.prep_gates = prep;
    e.map_gates = map;
    e.measurement_terms = colspace;
    e.prep_complexity = options.gates == GateModel::local ? "O(N_P (LM)^2 log(LM))" : "O(N_P (LM)^2)";
    e.map_complexity = options.gates == GateModel::local ? "O(M^2 log M)" : "O(M^2)";
    return e;
}

double onehot_cost(std::size_t rows, std::size_t features) {
    const auto o = estimate(Encoder::onehot, rows, features);
    return static_cast<double>(o.prep_gates + o.map_gates) * static_cast<double>(o.qubits);
}

double compare_cost_ratio(std::size_t rows, std::size_t features, std::size_t precision_bits) {
    if (rows < 2 || features < 2) throw Error(ErrorCode::InvalidShape, "cost ratio needs L >= 2 and M >= 2");
    ResourceOptions opt;
    opt.precision_bits = precision_bits;
    const auto c = estimate(Encoder::binary, rows, features, opt);
    const double tc = static_cast<double>(c.prep_gates + c.map_gates);
    const double qc = static_cast<double>(c.qubits);
    return tc * qc / onehot_cost(rows, features);
}

double classical_cost(std::size_t rows, std::size_t features) {
    const double lm = static_cast<double>(rows) * static_cast<double>(features);
    const double m = static_cast<double>(features);
    return lm * (lm * m + lm);
}

}  // namespace xqr
