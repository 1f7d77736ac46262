#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xqr/data_table.hpp"
#include "xqr/onehot.hpp"
#include "xqr/statevector.hpp"

namespace xqr {

/// Column register on qubits [0, N_M), row register on [N_M, N_K), ancilla N_K.
/// Key k = (l << N_M) | m; keys with l >= L or m > M are padding.
struct BinaryLayout {
    std::size_t rows = 0;      // L
    std::size_t features = 0;  // M
    std::size_t row_qubits = 0;     // N_L
    std::size_t column_qubits = 0;  // N_M

    std::size_t columns() const noexcept { return features + 1; }
    std::size_t keys() const noexcept { return rows * columns(); }  // K
    std::size_t key_qubits() const noexcept { return row_qubits + column_qubits; }  // N_K
    std::size_t n_qubits() const noexcept { return key_qubits() + 1; }
    Qubit ancilla() const noexcept { return key_qubits(); }
    std::uint64_t key(std::size_t l, std::size_t m) const noexcept { return (std::uint64_t{l} << column_qubits) | m; }
    bool valid_key(std::uint64_t key) const noexcept;
    QubitLayout qubit_layout() const;
};

/// ceil(log2(n)) with ceil_log2(1) = 0.
std::size_t ceil_log2(std::size_t n) noexcept;

BinaryLayout make_binary_layout(std::size_t rows, std::size_t features);
BinaryLayout binary_layout_for(const DataTable& table);

/// x~ = a * sum_j 2^-j (-1)^{b_j}, j = 1..N_P.
struct DigitizedValue {
    std::vector<std::uint8_t> bits;
    double scale = 1.0;

    double value() const noexcept;
};

/// Greedy signed-binary expansion; |x - value| <= a 2^-N_P.
DigitizedValue digitize(double x, double a, std::size_t precision_bits);

enum class PhaseTarget {
    linear,  // memory holds x; the prepared amplitudes follow sin(x~)
    arcsin,  // memory holds arcsin(x); the prepared amplitudes follow x up to digitization
};

/// Classical content of the memory register: one digitized value per key,
/// in table (row-major) order.
struct MemoryRegister {
    double scale = 1.0;
    std::size_t precision_bits = 0;
    std::size_t rows = 0;
    std::size_t features = 0;
    PhaseTarget target = PhaseTarget::linear;
    std::vector<DigitizedValue> values;

    std::vector<double> digitized() const;
    nlohmann::json to_json() const;
    static MemoryRegister from_json(const nlohmann::json& j);
};

/// Digitizes a normalized table. Default scale is max|stored value| * (1 + 1e-9).
MemoryRegister load_memory(const DataTable& normalized_table, std::size_t precision_bits,
                           std::optional<double> scale = std::nullopt, PhaseTarget target = PhaseTarget::linear);

enum class MemoryModel {
    quantum,    // one rotation set per key and memory bit
    classical,  // one rotation set per key, phase read from classical memory
};

enum class GateModel { global, local };

struct PrepOptions {
    MemoryModel memory = MemoryModel::quantum;
    GateModel gates = GateModel::global;
};

struct BinaryPreparation {
    StateVector state;
    double success_probability = 0.0;
    double fidelity_to_target = 0.0;  // against normalized sin(x~_k), what the circuit should produce
};

/// Ancilla |+>, Hadamards on the key register, per-key phase kickback
/// exp(-i x~_k Z_A |k><k|) in Pauli-expanded form, projection of the ancilla
/// on |->, then the ancilla is returned to |0> and the state renormalized.
BinaryPreparation prepare_binary_state_full(const MemoryRegister& memory, const BinaryLayout& layout,
                                            const PrepOptions& options = {});

/// |<psi_D|state>|^2 with psi_D the table-ordered amplitudes placed on their keys.
double binary_fidelity(const StateVector& state, std::span<const double> amplitudes, const BinaryLayout& layout);

/// Places table-ordered amplitudes (length K) on their keys; padding keys get 0.
StateVector prepare_binary_state_ideal(std::span<const double> amplitudes, const BinaryLayout& layout);
StateVector prepare_binary_table(const DataTable& normalized_table);

/// Amplitudes of the valid keys in table order (ancilla 0).
std::vector<double> read_binary_amplitudes(const StateVector& state, const BinaryLayout& layout);

enum class BinaryMapModel {
    direct,  // one subset phase per column value
    pauli,   // 2^N_M Z-string rotations per column value
};

struct BinaryMapOptions {
    BinaryMapModel model = BinaryMapModel::direct;
    GateModel gates = GateModel::global;  // local: Z strings as CNOT ladders onto the ancilla
};

void apply_regression_map_binary(StateVector& state, std::span<const double> phi, const BinaryLayout& layout,
                                 const BinaryMapOptions& options = {});

/// <I^{N_L} (x) (I+X)^{N_M}> restricted to valid rows: Hadamard on the column
/// register, then 2^N_M * sum_{l<L} P(row = l, column = 0).
double expectation_M_binary(const StateVector& state, const BinaryLayout& layout);

/// Exact readout-degraded expectation with independent flips on every row and
/// column qubit.
double readout_error_expectation_binary(const StateVector& state, double delta, const BinaryLayout& layout);

/// Shot sampling of expectation_M_binary with readout flips. Flip draws are
/// consumed for every shot so runs that differ only in delta are coupled.
ShotEstimate sample_shots_binary(const StateVector& state, std::size_t shots, double delta, std::uint64_t seed,
                                 const BinaryLayout& layout);

}  // namespace xqr
