#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xqr/data_table.hpp"
#include "xqr/statevector.hpp"

namespace xqr {

/// One qubit per table cell plus an ancilla. Cell (l, m) lives on qubit
/// j = m + l(M+1); the ancilla is qubit K = L(M+1).
struct OneHotLayout {
    std::size_t rows = 0;      // L
    std::size_t features = 0;  // M

    std::size_t columns() const noexcept { return features + 1; }
    std::size_t data_qubits() const noexcept { return rows * columns(); }
    std::size_t n_qubits() const noexcept { return data_qubits() + 1; }
    Qubit ancilla() const noexcept { return data_qubits(); }
    QubitLayout qubit_layout() const;
};

OneHotLayout make_onehot_layout(std::size_t rows, std::size_t features);
OneHotLayout onehot_layout_for(const DataTable& table);

/// j = m + l(M+1).
std::size_t onehot_index(std::size_t l, std::size_t m, std::size_t features);
std::size_t onehot_index(std::size_t l, std::size_t m, const OneHotLayout& layout);

/// Gadget angles for the chain (0,1), (1,2), ..., (K-2, K-1). Always K-1
/// angles; once the residual norm drops below 1e-14 the rest are zero.
std::vector<double> gadget_angles(std::span<const double> amplitudes);

/// Starts from |1_0> and runs the gadget chain. Amplitudes are in one-hot
/// index order (row-major table order) and must have unit norm.
StateVector prepare_onehot_state(std::span<const double> amplitudes, const OneHotLayout& layout);
StateVector prepare_onehot_table(const DataTable& normalized_table);

/// Real amplitudes of |1_j> (ancilla 0), j = 0..K-1.
std::vector<double> read_onehot_amplitudes(const StateVector& state, const OneHotLayout& layout);

enum class MapModel {
    direct,  // one ancilla-controlled subset phase per cell
    local,   // three Z-type rotations per (ancilla, cell) pair
    global,  // fused multi-qubit pulses, one per group of columns
};

struct MapOptions {
    MapModel model = MapModel::direct;
    std::size_t columns_per_pulse = 1;  // global model only
};

/// Ancilla-controlled phase phi_m on every cell of column m.
void apply_regression_map_onehot(StateVector& state, std::span<const double> phi, const OneHotLayout& layout,
                                 const MapOptions& options = {});

struct OneHotCircuitCounts {
    GateCounts prep;
    GateCounts map;
};

/// Runs the preparation chain and the regression map on a counting-only
/// register, so shapes far beyond the dense limit can be instrumented.
OneHotCircuitCounts onehot_circuit_counts(const OneHotLayout& layout, const MapOptions& options = {});

/// Sum over rows of |sum_m psi_lm|^2 from row-block amplitude sums.
double expectation_M_onehot(const StateVector& state, const OneHotLayout& layout);

/// Same quantity from the Pauli form I + 1/2 sum_{m<m'} (X X + Y Y) within each row block.
double expectation_M_onehot_pauli(const StateVector& state, const OneHotLayout& layout);

/// Number of Pauli terms in the measurement operator: 1 + L M (M+1).
std::size_t onehot_measurement_terms(const OneHotLayout& layout);

/// Rotates every row block so its uniform superposition lands on the block's
/// first qubit, then reads all data qubits through independent bit flips of
/// probability delta. Returns (M+1) * sum_l P(read exactly |1_{j(l,0)}>).
double readout_error_expectation_onehot(const StateVector& state, double delta, const OneHotLayout& layout);

struct ShotEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t shots = 0;
    std::size_t signal_shots = 0;          // shots counted toward the estimate
    std::size_t ideal_signal_shots = 0;    // same, had readout been perfect
    std::size_t misread_signal_shots = 0;  // ideal signal shots corrupted by readout
};

/// Monte-Carlo version of readout_error_expectation_onehot. The state may be
/// sub-normalized; the missing mass is the failed-post-selection branch.
ShotEstimate sample_shots_onehot(const StateVector& state, std::size_t shots, double delta, std::uint64_t seed,
                                 const OneHotLayout& layout);

}  // namespace xqr
