#include "xqr/binary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "xqr/error.hpp"
#include "xqr/rng.hpp"

namespace xqr {

namespace {

constexpr double kNormTolerance = 1e-10;

void check_state(const StateVector& state, const BinaryLayout& layout) {
    if (state.n_qubits() != layout.n_qubits()) {
        throw Error(ErrorCode::LayoutMismatch, "state has " + std::to_string(state.n_qubits()) +
                                                   " qubits, binary layout needs " +
                                                   std::to_string(layout.n_qubits()));
    }
}

void check_probability(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "readout error " + format_double(delta) + " outside [0,1]");
    }
}

std::uint64_t key_mask(const BinaryLayout& layout) { return (std::uint64_t{1} << layout.key_qubits()) - 1; }

std::uint64_t column_of(std::uint64_t index, const BinaryLayout& layout) {
    return index & ((std::uint64_t{1} << layout.column_qubits) - 1);
}

std::uint64_t row_of(std::uint64_t index, const BinaryLayout& layout) {
    return (index & key_mask(layout)) >> layout.column_qubits;
}

// exp(-i theta Z_A Z_P). Under the local gate model the string is built as a
// CNOT ladder collecting the parity of P onto the ancilla around one Z rotation.
void z_string_with_ancilla(StateVector& state, Qubit ancilla, std::uint64_t subset, double theta, GateModel gates) {
    std::vector<Qubit> support;
    for (std::uint64_t rest = subset; rest; rest &= rest - 1) support.push_back(std::countr_zero(rest));
    if (gates == GateModel::global) {
        support.push_back(ancilla);
        state.apply_z_string_rotation(support, theta);
        return;
    }
    for (Qubit q : support) state.apply_cnot(q, ancilla);
    const Qubit a[] = {ancilla};
    state.apply_z_string_rotation(a, theta);
    for (auto it = support.rbegin(); it != support.rend(); ++it) state.apply_cnot(*it, ancilla);
}

}  // namespace

std::size_t ceil_log2(std::size_t n) noexcept {
    return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

bool BinaryLayout::valid_key(std::uint64_t k) const noexcept {
    const std::uint64_t m = k & ((std::uint64_t{1} << column_qubits) - 1);
    const std::uint64_t l = k >> column_qubits;
    return m <= features && l < rows;
}

QubitLayout BinaryLayout::qubit_layout() const {
    return QubitLayout(n_qubits(), ancilla(),
                       {RegisterSpan{"column", 0, column_qubits}, RegisterSpan{"row", column_qubits, row_qubits}});
}

BinaryLayout make_binary_layout(std::size_t rows, std::size_t features) {
    if (rows < 1) throw Error(ErrorCode::InvalidShape, "binary layout needs at least one row");
    BinaryLayout layout{rows, features, ceil_log2(rows), ceil_log2(features + 1)};
    if (layout.n_qubits() > StateVector::max_qubits) {
        throw Error(ErrorCode::InvalidShape, "binary encoding needs " + std::to_string(layout.n_qubits()) + " qubits");
    }
    return layout;
}

BinaryLayout binary_layout_for(const DataTable& table) { return make_binary_layout(table.rows(), table.features()); }

double DigitizedValue::value() const noexcept {
    double v = 0.0;
    double step = scale;
    for (auto b : bits) {
        step *= 0.5;
        v += b ? -step : step;
    }
    return v;
}

DigitizedValue digitize(double x, double a, std::size_t precision_bits) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
    if (precision_bits < 1) throw Error(ErrorCode::InvalidArgument, "need at least one bit of precision");
    if (!(std::abs(x) <= a)) {
        throw Error(ErrorCode::OutOfRange, format_double(x) + " outside [-" + format_double(a) + ", " +
                                               format_double(a) + "]");
    }
    DigitizedValue d;
    d.scale = a;
    d.bits.resize(precision_bits);
    double r = x;
    double step = a;
    for (std::size_t j = 0; j < precision_bits; ++j) {
        step *= 0.5;
        const bool negative = r < 0.0;
        d.bits[j] = negative ? 1 : 0;
        r -= negative ? -step : step;
    }
    return d;
}

std::vector<double> MemoryRegister::digitized() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.value());
    return out;
}

nlohmann::json MemoryRegister::to_json() const {
    nlohmann::json j;
    j["scale"] = scale;
    j["precision_bits"] = precision_bits;
    j["rows"] = rows;
    j["features"] = features;
    j["target"] = target == PhaseTarget::linear ? "linear" : "arcsin";
    auto& keys = j["keys"] = nlohmann::json::array();
    const std::size_t C = features + 1;
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::string bits;
        for (auto b : values[k].bits) bits.push_back(b ? '1' : '0');
        keys.push_back({{"l", k / C}, {"m", k % C}, {"bits", bits}});
    }
    return j;
}

MemoryRegister MemoryRegister::from_json(const nlohmann::json& j) {
    try {
        MemoryRegister mem;
        mem.scale = j.at("scale").get<double>();
        mem.precision_bits = j.at("precision_bits").get<std::size_t>();
        mem.rows = j.at("rows").get<std::size_t>();
        mem.features = j.at("features").get<std::size_t>();
        mem.target = j.value("target", std::string("linear")) == "arcsin" ? PhaseTarget::arcsin : PhaseTarget::linear;
        for (const auto& key : j.at("keys")) {
            DigitizedValue d;
            d.scale = mem.scale;
            for (char c : key.at("bits").get<std::string>()) {
                if (c != '0' && c != '1') throw Error(ErrorCode::ParseError, "memory bits must be 0 or 1");
                d.bits.push_back(c == '1');
            }
            if (d.bits.size() != mem.precision_bits) throw Error(ErrorCode::ParseError, "bit string length mismatch");
            mem.values.push_back(std::move(d));
        }
        if (mem.values.size() != mem.rows * (mem.features + 1)) {
            throw Error(ErrorCode::ParseError, "memory key count does not match its shape");
        }
        return mem;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("memory JSON: ") + e.what());
    }
}

MemoryRegister load_memory(const DataTable& table, std::size_t precision_bits, std::optional<double> scale,
                           PhaseTarget target) {
    if (table.empty()) throw Error(ErrorCode::EmptyMemory, "no data to load");
    std::vector<double> stored(table.values().begin(), table.values().end());
    if (target == PhaseTarget::arcsin) {
        for (double& v : stored) {
            if (std::abs(v) > 1.0) throw Error(ErrorCode::OutOfRange, "arcsin target needs |x| <= 1");
            v = std::asin(v);
        }
    }
    double a = 0.0;
    if (scale) {
        a = *scale;
    } else {
        for (double v : stored) a = std::max(a, std::abs(v));
        a = a > 0.0 ? a * (1.0 + 1e-9) : 1.0;
    }
    MemoryRegister mem;
    mem.scale = a;
    mem.precision_bits = precision_bits;
    mem.rows = table.rows();
    mem.features = table.features();
    mem.target = target;
    mem.values.reserve(stored.size());
    for (double v : stored) mem.values.push_back(digitize(v, a, precision_bits));
    return mem;
}

BinaryPreparation prepare_binary_state_full(const MemoryRegister& memory, const BinaryLayout& layout,
                                            const PrepOptions& options) {
    if (memory.values.empty()) throw Error(ErrorCode::EmptyMemory, "memory register holds no keys");
    if (memory.rows != layout.rows || memory.features != layout.features || memory.values.size() != layout.keys()) {
        throw Error(ErrorCode::LayoutMismatch, "memory shape does not match the layout");
    }
    const std::size_t NK = layout.key_qubits();
    const Qubit A = layout.ancilla();
    const double weight = std::ldexp(1.0, -static_cast<int>(NK));
    const std::uint64_t subsets = std::uint64_t{1} << NK;

    StateVector state(layout.n_qubits());
    state.apply_hadamard(A);
    for (Qubit q = 0; q < NK; ++q) state.apply_hadamard(q);

    // exp(-i x Z_A |k><k|) = prod_P exp(-i x 2^-NK (-1)^{|P & k|} Z_A Z_P)
    auto kick = [&](std::uint64_t key, double angle) {
        for (std::uint64_t P = 0; P < subsets; ++P) {
            const double sign = (std::popcount(P & key) & 1) ? -1.0 : 1.0;
            z_string_with_ancilla(state, A, P, sign * weight * angle, options.gates);
        }
    };

    const std::size_t C = layout.columns();
    for (std::size_t k = 0; k < memory.values.size(); ++k) {
        const std::uint64_t key = layout.key(k / C, k % C);
        const DigitizedValue& d = memory.values[k];
        if (options.memory == MemoryModel::classical) {
            kick(key, d.value());
        } else {
            double step = d.scale;
            for (auto b : d.bits) {
                step *= 0.5;
                kick(key, b ? -step : step);
            }
        }
    }

    // Ancilla branch <-| carries -i sin(x~_k); bring it back to |0> with a real sign.
    const double p = state.project(A, Outcome::minus);
    if (p <= 0.0) throw Error(ErrorCode::ZeroNorm, "post-selection on |-> has zero probability");
    state.apply_hadamard(A);
    state.apply_x(A);
    state.scale(Amplitude{0.0, 1.0});
    state.renormalize();

    std::vector<double> target;
    target.reserve(memory.values.size());
    for (const auto& d : memory.values) target.push_back(std::sin(d.value()));
    double n2 = 0.0;
    for (double t : target) n2 += t * t;
    double fid = 0.0;
    if (n2 > 0.0) {
        const double inv = 1.0 / std::sqrt(n2);
        for (double& t : target) t *= inv;
        fid = binary_fidelity(state, target, layout);
    }
    return {std::move(state), p, fid};
}

double binary_fidelity(const StateVector& state, std::span<const double> amplitudes, const BinaryLayout& layout) {
    check_state(state, layout);
    if (amplitudes.size() != layout.keys()) throw Error(ErrorCode::DimensionMismatch, "amplitude count != K");
    const std::size_t C = layout.columns();
    Amplitude overlap{0.0, 0.0};
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        overlap += amplitudes[k] * state.amplitude(layout.key(k / C, k % C));
    }
    return std::norm(overlap);
}

StateVector prepare_binary_state_ideal(std::span<const double> amplitudes, const BinaryLayout& layout) {
    if (amplitudes.size() != layout.keys()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(layout.keys()) + " amplitudes, got " +
                                                      std::to_string(amplitudes.size()));
    }
    double n2 = 0.0;
    for (double v : amplitudes) n2 += v * v;
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        throw Error(ErrorCode::NotNormalized, "amplitude norm squared is " + format_double(n2));
    }
    std::vector<Amplitude> amps(std::size_t{1} << layout.n_qubits(), Amplitude{0.0, 0.0});
    const std::size_t C = layout.columns();
    for (std::size_t k = 0; k < amplitudes.size(); ++k) amps[layout.key(k / C, k % C)] = amplitudes[k];
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector prepare_binary_table(const DataTable& normalized_table) {
    return prepare_binary_state_ideal(normalized_table.values(), binary_layout_for(normalized_table));
}

std::vector<double> read_binary_amplitudes(const StateVector& state, const BinaryLayout& layout) {
    check_state(state, layout);
    const std::size_t C = layout.columns();
    std::vector<double> out(layout.keys());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = state.amplitude(layout.key(k / C, k % C)).real();
    return out;
}

void apply_regression_map_binary(StateVector& state, std::span<const double> phi, const BinaryLayout& layout,
                                 const BinaryMapOptions& options) {
    check_state(state, layout);
    const std::size_t C = layout.columns();
    if (phi.size() != C) {
        throw Error(ErrorCode::LayoutMismatch,
                    "expected " + std::to_string(C) + " phases, got " + std::to_string(phi.size()));
    }
    const Qubit A = layout.ancilla();
    if (options.model == BinaryMapModel::direct) {
        for (std::size_t m = 0; m < C; ++m) {
            state.apply_controlled_subset_phase(
                A, [&layout, m](std::uint64_t i) { return column_of(i, layout) == m; }, phi[m]);
        }
        return;
    }
    // exp(i phi Z_A |m><m|_col) = prod_{P in column qubits} exp(i phi 2^-NM (-1)^{|P & m|} Z_A Z_P)
    const std::uint64_t subsets = std::uint64_t{1} << layout.column_qubits;
    const double weight = std::ldexp(1.0, -static_cast<int>(layout.column_qubits));
    for (std::size_t m = 0; m < C; ++m) {
        for (std::uint64_t P = 0; P < subsets; ++P) {
            const double sign = (std::popcount(P & m) & 1) ? -1.0 : 1.0;
            z_string_with_ancilla(state, A, P, -sign * weight * phi[m], options.gates);
        }
    }
}

namespace {

StateVector column_hadamards(const StateVector& state, const BinaryLayout& layout) {
    StateVector s = state;
    for (Qubit q = 0; q < layout.column_qubits; ++q) s.apply_hadamard(q);
    return s;
}

bool is_signal(std::uint64_t key, const BinaryLayout& layout) {
    return column_of(key, layout) == 0 && row_of(key, layout) < layout.rows;
}

}  // namespace

double expectation_M_binary(const StateVector& state, const BinaryLayout& layout) {
    check_state(state, layout);
    const StateVector h = column_hadamards(state, layout);
    const auto amps = h.amplitudes();
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (is_signal(i & key_mask(layout), layout)) p += std::norm(amps[i]);
    }
    return std::ldexp(p, static_cast<int>(layout.column_qubits));
}

double readout_error_expectation_binary(const StateVector& state, double delta, const BinaryLayout& layout) {
    check_state(state, layout);
    check_probability(delta);
    const StateVector h = column_hadamards(state, layout);
    const std::size_t NK = layout.key_qubits();
    std::vector<double> pattern(std::size_t{1} << NK, 0.0);
    const auto amps = h.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) pattern[i & key_mask(layout)] += std::norm(amps[i]);

    std::vector<double> weight(NK + 1);
    for (std::size_t d = 0; d <= NK; ++d) {
        weight[d] = std::pow(delta, static_cast<double>(d)) * std::pow(1.0 - delta, static_cast<double>(NK - d));
    }
    double hit = 0.0;
    for (std::size_t l = 0; l < layout.rows; ++l) {
        const std::uint64_t target = layout.key(l, 0);
        for (std::uint64_t x = 0; x < pattern.size(); ++x) {
            if (pattern[x] != 0.0) hit += pattern[x] * weight[static_cast<std::size_t>(std::popcount(x ^ target))];
        }
    }
    return std::ldexp(hit, static_cast<int>(layout.column_qubits));
}

ShotEstimate sample_shots_binary(const StateVector& state, std::size_t shots, double delta, std::uint64_t seed,
                                 const BinaryLayout& layout) {
    check_state(state, layout);
    check_probability(delta);
    if (shots < 1) throw Error(ErrorCode::InvalidArgument, "need at least one shot");
    const StateVector h = column_hadamards(state, layout);
    const auto amps = h.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) cdf[i] = (acc += std::norm(amps[i]));

    const std::size_t NK = layout.key_qubits();
    const std::uint64_t kmask = key_mask(layout);
    Rng rng = make_rng(seed, 0x55);
    ShotEstimate out;
    out.shots = shots;
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng);
        const bool ran = u < acc;
        std::uint64_t key = 0;
        if (ran) {
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            key = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1)) & kmask;
        }
        std::uint64_t read = key;
        for (std::size_t q = 0; q < NK; ++q) {
            if (uniform01(rng) < delta) read ^= qubit_mask(q);
        }
        const bool ideal = ran && is_signal(key, layout);
        const bool noisy = ran && is_signal(read, layout);
        out.ideal_signal_shots += ideal;
        out.signal_shots += noisy;
        out.misread_signal_shots += ideal && read != key;
    }
    const double scale = std::ldexp(1.0, static_cast<int>(layout.column_qubits));
    const double p = static_cast<double>(out.signal_shots) / static_cast<double>(shots);
    out.estimate = scale * p;
    out.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    return out;
}

}  // namespace xqr
