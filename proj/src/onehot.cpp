#include "xqr/onehot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "xqr/error.hpp"
#include "xqr/rng.hpp"

namespace xqr {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kSupportTolerance = 1e-9;
constexpr double kResidualCutoff = 1e-14;

void check_state(const StateVector& state, const OneHotLayout& layout) {
    if (state.n_qubits() != layout.n_qubits()) {
        throw Error(ErrorCode::LayoutMismatch, "state has " + std::to_string(state.n_qubits()) +
                                                   " qubits, one-hot layout needs " +
                                                   std::to_string(layout.n_qubits()));
    }
}

std::uint64_t data_mask(const OneHotLayout& layout) {
    return layout.data_qubits() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << layout.data_qubits()) - 1;
}

void run_gadget_chain(StateVector& state, const std::vector<double>& theta) {
    for (std::size_t j = 0; j < theta.size(); ++j) state.apply_gadget(j, j + 1, theta[j]);
}

}  // namespace

QubitLayout OneHotLayout::qubit_layout() const {
    return QubitLayout(n_qubits(), ancilla(), {RegisterSpan{"data", 0, data_qubits()}});
}

OneHotLayout make_onehot_layout(std::size_t rows, std::size_t features) {
    if (rows < 1) throw Error(ErrorCode::InvalidShape, "one-hot layout needs at least one row");
    return OneHotLayout{rows, features};
}

OneHotLayout onehot_layout_for(const DataTable& table) {
    return make_onehot_layout(table.rows(), table.features());
}

std::size_t onehot_index(std::size_t l, std::size_t m, std::size_t features) {
    if (m > features) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "column " + std::to_string(m) + " exceeds M=" + std::to_string(features));
    }
    return m + l * (features + 1);
}

std::size_t onehot_index(std::size_t l, std::size_t m, const OneHotLayout& layout) {
    if (l >= layout.rows) throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(l));
    return onehot_index(l, m, layout.features);
}

std::vector<double> gadget_angles(std::span<const double> x) {
    const std::size_t K = x.size();
    if (K < 2) return {};
    // Suffix norms are more accurate than 1 - prefix sums for small tails.
    std::vector<double> residual(K + 1, 0.0);
    for (std::size_t j = K; j-- > 0;) residual[j] = std::hypot(residual[j + 1], x[j]);

    std::vector<double> theta(K - 1, 0.0);
    for (std::size_t j = 0; j + 2 < K; ++j) {
        if (residual[j] < kResidualCutoff) break;
        theta[j] = std::atan2(residual[j + 1], x[j]);
    }
    if (residual[K - 2] >= kResidualCutoff) theta[K - 2] = std::atan2(x[K - 1], x[K - 2]);
    return theta;
}

StateVector prepare_onehot_state(std::span<const double> amplitudes, const OneHotLayout& layout) {
    const std::size_t K = layout.data_qubits();
    if (amplitudes.size() != K) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(K) + " amplitudes, got " + std::to_string(amplitudes.size()));
    }
    double n2 = 0.0;
    for (double v : amplitudes) n2 += v * v;
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        throw Error(ErrorCode::NotNormalized, "amplitude norm squared is " + format_double(n2));
    }
    if (layout.n_qubits() > StateVector::max_qubits) {
        throw Error(ErrorCode::InvalidShape,
                    std::to_string(layout.n_qubits()) + " qubits is beyond the dense simulator");
    }
    StateVector state = StateVector::basis(layout.n_qubits(), 1);
    run_gadget_chain(state, gadget_angles(amplitudes));
    return state;
}

OneHotCircuitCounts onehot_circuit_counts(const OneHotLayout& layout, const MapOptions& options) {
    StateVector state = StateVector::counting_only(layout.n_qubits());
    run_gadget_chain(state, std::vector<double>(layout.data_qubits() - 1, 0.0));
    OneHotCircuitCounts out;
    out.prep = state.counts();
    state.reset_counts();
    apply_regression_map_onehot(state, std::vector<double>(layout.columns(), 0.0), layout, options);
    out.map = state.counts();
    return out;
}

StateVector prepare_onehot_table(const DataTable& normalized_table) {
    return prepare_onehot_state(normalized_table.values(), onehot_layout_for(normalized_table));
}

std::vector<double> read_onehot_amplitudes(const StateVector& state, const OneHotLayout& layout) {
    check_state(state, layout);
    std::vector<double> out(layout.data_qubits());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = state.amplitude(qubit_mask(j)).real();
    return out;
}

void apply_regression_map_onehot(StateVector& state, std::span<const double> phi, const OneHotLayout& layout,
                                 const MapOptions& options) {
    check_state(state, layout);
    const std::size_t C = layout.columns();
    if (phi.size() != C) {
        throw Error(ErrorCode::LayoutMismatch,
                    "expected " + std::to_string(C) + " phases, got " + std::to_string(phi.size()));
    }
    const Qubit A = layout.ancilla();

    switch (options.model) {
        case MapModel::direct:
            for (std::size_t l = 0; l < layout.rows; ++l) {
                for (std::size_t m = 0; m < C; ++m) {
                    const std::uint64_t bit = qubit_mask(onehot_index(l, m, layout.features));
                    state.apply_controlled_subset_phase(A, [bit](std::uint64_t i) { return (i & bit) != 0; }, phi[m]);
                }
            }
            break;

        case MapModel::local:
            // Hardware form: uncontrolled phase on the cell, then an
            // ancilla-controlled double phase. Expanded in Z strings this is
            // exp(i phi/2 Z_A) exp(-i phi/2 Z_A Z_j) with the two Z_j terms
            // fused into a single rotation.
            for (std::size_t l = 0; l < layout.rows; ++l) {
                for (std::size_t m = 0; m < C; ++m) {
                    const Qubit j = onehot_index(l, m, layout.features);
                    const double uncontrolled_zj = phi[m] / 2.0;
                    const double controlled_zj = -phi[m] / 2.0;
                    const Qubit a_only[] = {A};
                    const Qubit j_only[] = {j};
                    const Qubit pair[] = {A, j};
                    state.apply_z_string_rotation(a_only, -phi[m] / 2.0);
                    state.apply_z_string_rotation(j_only, uncontrolled_zj + controlled_zj);
                    state.apply_z_string_rotation(pair, phi[m] / 2.0);
                }
            }
            break;

        case MapModel::global: {
            const std::size_t per = options.columns_per_pulse;
            if (per < 1) throw Error(ErrorCode::InvalidArgument, "columns_per_pulse must be at least 1");
            const std::uint64_t anc = qubit_mask(A);
            for (std::size_t first = 0; first < C; first += per) {
                const std::size_t last = std::min(C, first + per);
                state.apply_phase_pulse([&](std::uint64_t i) {
                    double p = 0.0;
                    for (std::size_t l = 0; l < layout.rows; ++l) {
                        for (std::size_t m = first; m < last; ++m) {
                            if (i & qubit_mask(onehot_index(l, m, layout.features))) p += phi[m];
                        }
                    }
                    return (i & anc) ? -p : p;
                });
            }
            break;
        }
    }
}

double expectation_M_onehot(const StateVector& state, const OneHotLayout& layout) {
    check_state(state, layout);
    const std::size_t C = layout.columns();
    const std::uint64_t dmask = data_mask(layout);
    const std::uint64_t anc = qubit_mask(layout.ancilla());
    std::vector<Amplitude> sums(2 * layout.rows, Amplitude{0.0, 0.0});
    double outside = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        const std::uint64_t d = i & dmask;
        if (std::popcount(d) != 1) {
            outside += std::norm(amps[i]);
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(std::countr_zero(d));
        sums[2 * (j / C) + ((i & anc) ? 1 : 0)] += amps[i];
    }
    if (outside > kSupportTolerance) {
        throw Error(ErrorCode::SupportViolation,
                    "amplitude mass " + format_double(outside) + " outside the one-hot subspace");
    }
    double e = 0.0;
    for (const auto& s : sums) e += std::norm(s);
    return e;
}

double expectation_M_onehot_pauli(const StateVector& state, const OneHotLayout& layout) {
    check_state(state, layout);
    const std::uint64_t dmask = data_mask(layout);
    const auto amps = state.amplitudes();
    double outside = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (std::popcount(i & dmask) != 1) outside += std::norm(amps[i]);
    }
    if (outside > kSupportTolerance) {
        throw Error(ErrorCode::SupportViolation,
                    "amplitude mass " + format_double(outside) + " outside the one-hot subspace");
    }

    double e = state.norm_squared();  // identity term
    const std::size_t C = layout.columns();
    for (std::size_t l = 0; l < layout.rows; ++l) {
        for (std::size_t m = 0; m < C; ++m) {
            for (std::size_t n = m + 1; n < C; ++n) {
                const Qubit qj = onehot_index(l, m, layout.features);
                const Qubit qk = onehot_index(l, n, layout.features);
                const std::uint64_t flip = qubit_mask(qj) | qubit_mask(qk);
                Amplitude xx{0.0, 0.0};
                Amplitude yy{0.0, 0.0};
                for (std::uint64_t i = 0; i < amps.size(); ++i) {
                    const Amplitude bra = std::conj(amps[i ^ flip]);
                    xx += bra * amps[i];
                    // Y|0> = i|1>, Y|1> = -i|0>
                    const bool bj = (i >> qj) & 1;
                    const bool bk = (i >> qk) & 1;
                    const double sign = (bj == bk) ? -1.0 : 1.0;
                    yy += bra * sign * amps[i];
                }
                e += 0.5 * (xx.real() + yy.real());
            }
        }
    }
    return e;
}

std::size_t onehot_measurement_terms(const OneHotLayout& layout) {
    return 1 + layout.rows * layout.features * layout.columns();
}

namespace {

// Maps each row block's uniform superposition onto the block's first qubit.
void rotate_row_blocks(StateVector& state, const OneHotLayout& layout) {
    const std::size_t C = layout.columns();
    const std::vector<double> uniform(C, 1.0 / std::sqrt(static_cast<double>(C)));
    const auto theta = gadget_angles(uniform);
    for (std::size_t l = 0; l < layout.rows; ++l) {
        const Qubit base = onehot_index(l, 0, layout.features);
        for (std::size_t k = theta.size(); k-- > 0;) state.apply_givens(base + k, base + k + 1, -theta[k]);
    }
}

bool is_row_target(std::uint64_t data, std::size_t columns) {
    return std::popcount(data) == 1 && static_cast<std::size_t>(std::countr_zero(data)) % columns == 0;
}

void check_probability(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "readout error " + format_double(delta) + " outside [0,1]");
    }
}

}  // namespace

double readout_error_expectation_onehot(const StateVector& state, double delta, const OneHotLayout& layout) {
    check_state(state, layout);
    check_probability(delta);
    StateVector rotated = state;
    rotate_row_blocks(rotated, layout);

    const std::size_t K = layout.data_qubits();
    const std::uint64_t dmask = data_mask(layout);
    std::vector<double> pattern(std::size_t{1} << K, 0.0);
    const auto amps = rotated.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) pattern[i & dmask] += std::norm(amps[i]);

    // P(read t | true x) = delta^d (1-delta)^(K-d), d = Hamming distance.
    std::vector<double> weight(K + 1);
    for (std::size_t d = 0; d <= K; ++d) {
        weight[d] = std::pow(delta, static_cast<double>(d)) * std::pow(1.0 - delta, static_cast<double>(K - d));
    }
    double hit = 0.0;
    for (std::size_t l = 0; l < layout.rows; ++l) {
        const std::uint64_t target = qubit_mask(onehot_index(l, 0, layout.features));
        for (std::uint64_t x = 0; x < pattern.size(); ++x) {
            if (pattern[x] != 0.0) hit += pattern[x] * weight[static_cast<std::size_t>(std::popcount(x ^ target))];
        }
    }
    return static_cast<double>(layout.columns()) * hit;
}

ShotEstimate sample_shots_onehot(const StateVector& state, std::size_t shots, double delta, std::uint64_t seed,
                                 const OneHotLayout& layout) {
    check_state(state, layout);
    check_probability(delta);
    if (shots < 1) throw Error(ErrorCode::InvalidArgument, "need at least one shot");
    StateVector rotated = state;
    rotate_row_blocks(rotated, layout);

    const auto amps = rotated.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) cdf[i] = (acc += std::norm(amps[i]));

    const std::size_t K = layout.data_qubits();
    const std::size_t C = layout.columns();
    const std::uint64_t dmask = data_mask(layout);
    Rng rng = make_rng(seed, 0x44);
    ShotEstimate out;
    out.shots = shots;
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng);
        std::uint64_t data = 0;
        bool ran = u < acc;  // otherwise post-selection failed
        if (ran) {
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            data = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1)) & dmask;
        }
        // Flip draws are consumed for every shot so runs at different delta stay coupled.
        std::uint64_t read = data;
        for (std::size_t q = 0; q < K; ++q) {
            if (uniform01(rng) < delta) read ^= qubit_mask(q);
        }
        const bool ideal = ran && is_row_target(data, C);
        const bool noisy = ran && is_row_target(read, C);
        out.ideal_signal_shots += ideal;
        out.signal_shots += noisy;
        out.misread_signal_shots += ideal && read != data;
    }
    const double p = static_cast<double>(out.signal_shots) / static_cast<double>(shots);
    out.estimate = static_cast<double>(C) * p;
    out.std_error = static_cast<double>(C) * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    return out;
}

}  // namespace xqr
