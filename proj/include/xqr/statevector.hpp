#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace xqr {

using Amplitude = std::complex<double>;
using Qubit = std::size_t;

// Qubit q is bit q of the basis index (qubit 0 is the least significant bit).
// Qubits past 63 only occur on counting-only registers and map to an empty mask.
inline constexpr std::uint64_t qubit_mask(Qubit q) noexcept { return q < 64 ? std::uint64_t{1} << q : 0; }

/// Per-kind invocation counters. Composite operations (the gadget) count
/// once under their own name, not as their parts.
struct GateCounts {
    std::size_t gadgets = 0;
    std::size_t givens = 0;
    std::size_t hadamards = 0;
    std::size_t x_gates = 0;
    std::size_t ry = 0;
    std::size_t cnots = 0;
    std::size_t controlled_ry = 0;
    std::size_t z_rotations = 0;    // Pauli Z-string rotations of any weight
    std::size_t subset_phases = 0;  // ancilla-controlled phase on a basis subset
    std::size_t phase_pulses = 0;   // fused diagonal rotations (global gate model)
    std::size_t projections = 0;

    friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

struct RegisterSpan {
    std::string name;
    Qubit first = 0;
    std::size_t size = 0;

    std::uint64_t mask() const noexcept {
        return size == 0 ? 0 : (((std::uint64_t{1} << size) - 1) << first);
    }
    std::uint64_t value_of(std::uint64_t index) const noexcept {
        return (index >> first) & ((std::uint64_t{1} << size) - 1);
    }

    friend bool operator==(const RegisterSpan&, const RegisterSpan&) = default;
};

/// Ancilla plus named contiguous registers. Construction checks that the
/// spans are disjoint and together with the ancilla cover every qubit.
class QubitLayout {
public:
    QubitLayout() = default;
    QubitLayout(std::size_t n_qubits, Qubit ancilla, std::vector<RegisterSpan> spans);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    Qubit ancilla() const noexcept { return ancilla_; }
    const std::vector<RegisterSpan>& spans() const noexcept { return spans_; }
    const RegisterSpan& span(const std::string& name) const;
    bool has_span(const std::string& name) const noexcept;

    friend bool operator==(const QubitLayout&, const QubitLayout&) = default;

private:
    std::size_t n_qubits_ = 0;
    Qubit ancilla_ = 0;
    std::vector<RegisterSpan> spans_;
};

enum class Outcome { zero, one, plus, minus };

class StateVector {
public:
    static constexpr std::size_t max_qubits = 26;

    explicit StateVector(std::size_t n_qubits);  // |0...0>
    static StateVector basis(std::size_t n_qubits, std::uint64_t index);
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);
    /// Gate bookkeeping without amplitudes, for registers too large to
    /// simulate (up to 4096 qubits). Gates validate their qubits and count;
    /// the amplitude list is empty.
    static StateVector counting_only(std::size_t n_qubits);
    bool counting() const noexcept { return amps_.empty(); }

    std::size_t n_qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }
    double norm_squared() const noexcept;

    const GateCounts& counts() const noexcept { return counts_; }
    void reset_counts() noexcept { counts_ = {}; }

    void apply_x(Qubit q);
    void apply_hadamard(Qubit q);
    void apply_ry(Qubit q, double theta);  // exp(-i theta Y / 2)
    void apply_cnot(Qubit control, Qubit target);
    void apply_controlled_ry(Qubit control, Qubit target, double theta);

    /// Controlled-Ry(2 theta) followed by CNOT from target back onto control:
    /// |1_c 0_t> -> cos(theta)|1_c 0_t> + sin(theta)|0_c 1_t>.
    void apply_gadget(Qubit control, Qubit target, double theta);

    /// Excitation-preserving rotation on span{|1_a 0_b>, |0_a 1_b>}:
    /// |1_a 0_b> -> cos|1_a 0_b> + sin|0_a 1_b>, |0_a 1_b> -> -sin|1_a 0_b> + cos|0_a 1_b>.
    void apply_givens(Qubit a, Qubit b, double theta);

    /// exp(-i theta Z_S): each amplitude times e^{-i theta (-1)^{parity of bits in S}}.
    void apply_z_string_rotation(std::span<const Qubit> qubits, double theta);

    /// Basis states with predicate true gain e^{+i phi} when the control is 0
    /// and e^{-i phi} when it is 1. The predicate sees the full basis index.
    void apply_controlled_subset_phase(Qubit control, const std::function<bool(std::uint64_t)>& predicate,
                                       double phi);

    /// Arbitrary diagonal: amplitude i times e^{i phase(i)}. Counted as one
    /// fused pulse; used to model globally addressed multi-qubit rotations.
    void apply_phase_pulse(const std::function<double(std::uint64_t)>& phase);

    /// Multiply every amplitude by a constant (e.g. the -i from a |-> projection).
    void scale(Amplitude factor) noexcept;

    /// In-place projector onto `outcome` for qubit q. The state is left
    /// unnormalized; returns its new norm squared (the outcome probability
    /// when the input was normalized).
    double project(Qubit q, Outcome outcome);

    void renormalize();

    nlohmann::json to_json() const;

private:
    StateVector() = default;
    void check_qubit(Qubit q) const;

    std::size_t n_ = 0;
    std::vector<Amplitude> amps_;
    GateCounts counts_;
};

struct Projection {
    StateVector state;
    double probability = 0.0;
};

/// Non-mutating projection: returns the unnormalized projected copy.
Projection project(const StateVector& state, Qubit q, Outcome outcome);

/// Marginal probability that qubit q reads 1.
double probability_one(const StateVector& state, Qubit q);

}  // namespace xqr
