#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "xqr/binary.hpp"
#include "xqr/regression.hpp"

namespace xqr {

struct ResourceOptions {
    std::size_t precision_bits = 12;  // N_P, binary only
    GateModel gates = GateModel::global;
    MemoryModel memory = MemoryModel::quantum;
    bool count_memory_qubits = false;   // add K * N_P memory qubits to the binary count
    std::size_t columns_per_pulse = 1;  // one-hot global map fusion granularity
};

/// Closed-form counts. They are definitions matching what the simulator
/// executes, so instrumented runs reproduce them exactly:
///   one-hot  qubits L(M+1)+1, prep L(M+1)-1 gadgets,
///            map 3 L(M+1) Z rotations (local) or ceil((M+1)/columns_per_pulse) pulses (global),
///            measurement 1 + L M (M+1) Pauli terms;
///   binary   qubits N_L+N_M+1 (+ K N_P), prep K N_P 2^N_K (K 2^N_K with classical memory),
///            map 2^N_M (M+1), measurement 2^N_M terms. The local gate model writes each
///            Z string on the ancilla plus n register qubits as 2n CNOTs and one rotation,
///            which multiplies the prep by N_K+1 and the map by N_M+1.
struct ResourceEstimate {
    Encoder encoding = Encoder::onehot;
    GateModel gates = GateModel::global;
    std::size_t rows = 0;
    std::size_t features = 0;
    std::size_t precision_bits = 0;
    std::size_t qubits = 0;
    std::size_t prep_gates = 0;
    std::size_t map_gates = 0;
    std::size_t measurement_terms = 0;
    std::string prep_complexity;
    std::string map_complexity;

    nlohmann::json to_json() const;
};

ResourceEstimate estimate(Encoder encoding, std::size_t rows, std::size_t features, const ResourceOptions& options = {});

/// Space-time product ratio (T_C Q_C) / (T_O Q_O) of the binary encoding
/// (quantum memory, global gates) over the one-hot encoding (global map).
double compare_cost_ratio(std::size_t rows, std::size_t features, std::size_t precision_bits);

/// Classical least-squares space-time product (LM)(LM^2 + LM).
double classical_cost(std::size_t rows, std::size_t features);

/// One-hot space-time product T_O Q_O.
double onehot_cost(std::size_t rows, std::size_t features);

std::string to_string(GateModel gates);
GateModel gate_model_from_string(const std::string& s);

}  // namespace xqr
