#include "xqr/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "xqr/error.hpp"

namespace xqr {

QubitLayout::QubitLayout(std::size_t n_qubits, Qubit ancilla, std::vector<RegisterSpan> spans)
    : n_qubits_(n_qubits), ancilla_(ancilla), spans_(std::move(spans)) {
    if (ancilla_ >= n_qubits_) throw Error(ErrorCode::LayoutMismatch, "ancilla outside the register");
    std::uint64_t covered = qubit_mask(ancilla_);
    for (const auto& s : spans_) {
        if (s.first + s.size > n_qubits_) {
            throw Error(ErrorCode::LayoutMismatch, "span '" + s.name + "' runs past the last qubit");
        }
        if (covered & s.mask()) throw Error(ErrorCode::LayoutMismatch, "span '" + s.name + "' overlaps");
        covered |= s.mask();
    }
    const std::uint64_t all = n_qubits_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits_) - 1;
    if (covered != all) throw Error(ErrorCode::LayoutMismatch, "spans and ancilla do not cover every qubit");
}

const RegisterSpan& QubitLayout::span(const std::string& name) const {
    for (const auto& s : spans_) {
        if (s.name == name) return s;
    }
    throw Error(ErrorCode::LayoutMismatch, "no register named '" + name + "'");
}

bool QubitLayout::has_span(const std::string& name) const noexcept {
    return std::any_of(spans_.begin(), spans_.end(), [&](const auto& s) { return s.name == name; });
}

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits > max_qubits) {
        throw Error(ErrorCode::InvalidArgument, std::to_string(n_qubits) + " qubits exceeds the dense limit");
    }
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(index));
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const std::size_t d = amplitudes.size();
    if (d == 0 || !std::has_single_bit(d)) {
        throw Error(ErrorCode::InvalidShape, "amplitude count " + std::to_string(d) + " is not a power of two");
    }
    StateVector s(static_cast<std::size_t>(std::countr_zero(d)));
    s.amps_ = std::move(amplitudes);
    return s;
}

StateVector StateVector::counting_only(std::size_t n_qubits) {
    if (n_qubits > 4096) throw Error(ErrorCode::InvalidArgument, std::to_string(n_qubits) + " qubits exceeds 4096");
    StateVector s;
    s.n_ = n_qubits;
    return s;
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::check_qubit(Qubit q) const {
    if (q >= n_) {
        throw Error(ErrorCode::QubitOutOfRange,
                    "qubit " + std::to_string(q) + " in a " + std::to_string(n_) + "-qubit state");
    }
}

void StateVector::apply_x(Qubit q) {
    check_qubit(q);
    const std::uint64_t m = qubit_mask(q);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (!(i & m)) std::swap(amps_[i], amps_[i | m]);
    }
    ++counts_.x_gates;
}

void StateVector::apply_hadamard(Qubit q) {
    check_qubit(q);
    const std::uint64_t m = qubit_mask(q);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & m) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | m];
        amps_[i] = r * (a0 + a1);
        amps_[i | m] = r * (a0 - a1);
    }
    ++counts_.hadamards;
}

namespace {

void ry_kernel(std::vector<Amplitude>& amps, std::uint64_t control_mask, std::uint64_t target_mask, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & target_mask) || (i & control_mask) != control_mask) continue;
        const Amplitude a0 = amps[i];
        const Amplitude a1 = amps[i | target_mask];
        amps[i] = c * a0 - s * a1;
        amps[i | target_mask] = s * a0 + c * a1;
    }
}

void cnot_kernel(std::vector<Amplitude>& amps, std::uint64_t control_mask, std::uint64_t target_mask) {
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & control_mask) && !(i & target_mask)) std::swap(amps[i], amps[i | target_mask]);
    }
}

}  // namespace

void StateVector::apply_ry(Qubit q, double theta) {
    check_qubit(q);
    ry_kernel(amps_, 0, qubit_mask(q), theta);
    ++counts_.ry;
}

void StateVector::apply_cnot(Qubit control, Qubit target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw Error(ErrorCode::InvalidArgument, "CNOT control equals target");
    cnot_kernel(amps_, qubit_mask(control), qubit_mask(target));
    ++counts_.cnots;
}

void StateVector::apply_controlled_ry(Qubit control, Qubit target, double theta) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw Error(ErrorCode::InvalidArgument, "controlled-Ry control equals target");
    ry_kernel(amps_, qubit_mask(control), qubit_mask(target), theta);
    ++counts_.controlled_ry;
}

void StateVector::apply_gadget(Qubit control, Qubit target, double theta) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw Error(ErrorCode::InvalidArgument, "gadget control equals target");
    ry_kernel(amps_, qubit_mask(control), qubit_mask(target), 2.0 * theta);
    cnot_kernel(amps_, qubit_mask(target), qubit_mask(control));
    ++counts_.gadgets;
}

void StateVector::apply_givens(Qubit a, Qubit b, double theta) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw Error(ErrorCode::InvalidArgument, "Givens rotation needs two distinct qubits");
    const std::uint64_t ma = qubit_mask(a);
    const std::uint64_t mb = qubit_mask(b);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if ((i & ma) && !(i & mb)) {
            const std::uint64_t j = (i & ~ma) | mb;
            const Amplitude v10 = amps_[i];
            const Amplitude v01 = amps_[j];
            amps_[i] = c * v10 - s * v01;
            amps_[j] = s * v10 + c * v01;
        }
    }
    ++counts_.givens;
}

void StateVector::apply_z_string_rotation(std::span<const Qubit> qubits, double theta) {
    if (qubits.empty()) throw Error(ErrorCode::InvalidArgument, "Z-string rotation needs at least one qubit");
    std::uint64_t mask = 0;
    for (Qubit q : qubits) {
        check_qubit(q);
        mask |= qubit_mask(q);
    }
    const Amplitude even = std::polar(1.0, -theta);
    const Amplitude odd = std::polar(1.0, theta);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        amps_[i] *= (std::popcount(i & mask) & 1) ? odd : even;
    }
    ++counts_.z_rotations;
}

void StateVector::apply_controlled_subset_phase(Qubit control, const std::function<bool(std::uint64_t)>& predicate,
                                                double phi) {
    check_qubit(control);
    const std::uint64_t m = qubit_mask(control);
    const Amplitude on0 = std::polar(1.0, phi);
    const Amplitude on1 = std::polar(1.0, -phi);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (predicate(i)) amps_[i] *= (i & m) ? on1 : on0;
    }
    ++counts_.subset_phases;
}

void StateVector::apply_phase_pulse(const std::function<double(std::uint64_t)>& phase) {
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        const double p = phase(i);
        if (p != 0.0) amps_[i] *= std::polar(1.0, p);
    }
    ++counts_.phase_pulses;
}

void StateVector::scale(Amplitude factor) noexcept {
    for (auto& a : amps_) a *= factor;
}

double StateVector::project(Qubit q, Outcome outcome) {
    check_qubit(q);
    if (counting()) {
        ++counts_.projections;
        return 0.0;
    }
    if (norm_squared() == 0.0) throw Error(ErrorCode::ZeroNorm, "cannot project the zero state");
    const std::uint64_t m = qubit_mask(q);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & m) continue;
        Amplitude& a0 = amps_[i];
        Amplitude& a1 = amps_[i | m];
        switch (outcome) {
            case Outcome::zero: a1 = 0.0; break;
            case Outcome::one: a0 = 0.0; break;
            case Outcome::plus: {
                const Amplitude s = 0.5 * (a0 + a1);
                a0 = s;
                a1 = s;
                break;
            }
            case Outcome::minus: {
                const Amplitude s = 0.5 * (a0 - a1);
                a0 = s;
                a1 = -s;
                break;
            }
        }
    }
    ++counts_.projections;
    return norm_squared();
}

void StateVector::renormalize() {
    if (counting()) return;
    const double n2 = norm_squared();
    if (n2 == 0.0) throw Error(ErrorCode::ZeroNorm, "cannot renormalize the zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) a *= inv;
}

nlohmann::json StateVector::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_;
    auto& list = j["amplitudes"] = nlohmann::json::array();
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        list.push_back({{"index", i}, {"re", amps_[i].real()}, {"im", amps_[i].imag()}});
    }
    return j;
}

Projection project(const StateVector& state, Qubit q, Outcome outcome) {
    StateVector copy = state;
    const double p = copy.project(q, outcome);
    return {std::move(copy), p};
}

double probability_one(const StateVector& state, Qubit q) {
    if (q >= state.n_qubits()) throw Error(ErrorCode::QubitOutOfRange, "qubit " + std::to_string(q));
    const std::uint64_t m = qubit_mask(q);
    double p = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & m) p += std::norm(amps[i]);
    }
    return p;
}

}  // namespace xqr
