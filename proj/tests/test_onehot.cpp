#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "xqr/error.hpp"
#include "xqr/onehot.hpp"

using namespace xqr;
using namespace testing_helpers;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector run_pipeline(const DataTable& t, const std::vector<double>& phi, MapOptions opt = {}) {
    const auto layout = onehot_layout_for(t);
    StateVector s = prepare_onehot_table(t);
    s.apply_hadamard(layout.ancilla());
    apply_regression_map_onehot(s, phi, layout, opt);
    s.apply_hadamard(layout.ancilla());
    s.project(layout.ancilla(), Outcome::zero);
    return s;
}

}  // namespace

TEST(OneHotIndex, Examples) {
    EXPECT_EQ(onehot_index(0, 0, 1), 0u);
    EXPECT_EQ(onehot_index(1, 0, 1), 2u);
    EXPECT_EQ(onehot_index(1, 1, 1), 3u);
    EXPECT_EQ(onehot_index(0, 5, 5), 5u);
    EXPECT_THROW(onehot_index(0, 2, 1), Error);
    const auto layout = make_onehot_layout(2, 1);
    EXPECT_THROW(onehot_index(2, 0, layout), Error);
    EXPECT_EQ(layout.n_qubits(), 5u);
    EXPECT_EQ(layout.ancilla(), 4u);
}

TEST(OneHotIndex, Bijection) {
    const auto layout = make_onehot_layout(5, 3);
    std::vector<int> seen(layout.data_qubits(), 0);
    for (std::size_t l = 0; l < 5; ++l)
        for (std::size_t m = 0; m <= 3; ++m) ++seen[onehot_index(l, m, layout)];
    for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(PrepareOneHot, BasisVectorNeedsNoRotation) {
    const auto layout = make_onehot_layout(2, 1);
    const std::vector<double> x = {1.0, 0.0, 0.0, 0.0};
    for (double t : gadget_angles(x)) EXPECT_EQ(t, 0.0);
    const StateVector s = prepare_onehot_state(x, layout);
    EXPECT_NEAR(s.amplitude(1).real(), 1.0, 1e-15);
    EXPECT_EQ(s.counts().gadgets, 3u);
}

TEST(PrepareOneHot, UniformGivesWState) {
    const auto layout = make_onehot_layout(3, 1);
    const std::size_t K = layout.data_qubits();
    const std::vector<double> x(K, 1.0 / std::sqrt(static_cast<double>(K)));
    const StateVector s = prepare_onehot_state(x, layout);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const double want = std::popcount(i) == 1 && i < (1u << K) ? 1.0 / std::sqrt(static_cast<double>(K)) : 0.0;
        EXPECT_NEAR(s.amplitude(i).real(), want, 1e-14);
        EXPECT_NEAR(s.amplitude(i).imag(), 0.0, 1e-14);
    }
}

TEST(PrepareOneHot, RandomVectorsRoundTrip) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t L = 1 + trial % 4;
        const std::size_t M = trial % 3;
        if (L * (M + 1) < 2) continue;
        const auto layout = make_onehot_layout(L, M);
        auto x = random_unit_vector(layout.data_qubits(), rng);
        if (trial % 5 == 0) {  // include exact zeros in the tail
            x.back() = 0.0;
            double s = 0;
            for (double v : x) s += v * v;
            for (double& v : x) v /= std::sqrt(s);
        }
        const StateVector s = prepare_onehot_state(x, layout);
        const auto back = read_onehot_amplitudes(s, layout);
        for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(back[j], x[j], 1e-10);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        EXPECT_EQ(s.counts().gadgets, layout.data_qubits() - 1);
    }
    // K = 12 from a direct amplitude injection oracle.
    const auto layout = make_onehot_layout(4, 2);
    const auto x = random_unit_vector(12, rng);
    const StateVector s = prepare_onehot_state(x, layout);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const double want = (std::popcount(i) == 1 && i < 4096) ? x[std::countr_zero(i)] : 0.0;
        EXPECT_NEAR(std::abs(s.amplitude(i) - want), 0.0, 1e-10);
    }
}

TEST(PrepareOneHot, EarlyResidualTruncation) {
    const auto layout = make_onehot_layout(3, 1);
    const std::vector<double> x = {0.6, -0.8, 0.0, 0.0, 0.0, 0.0};
    const auto theta = gadget_angles(x);
    ASSERT_EQ(theta.size(), 5u);
    EXPECT_NEAR(theta[1], std::numbers::pi, 1e-15);  // sign flip onto -0.8
    for (std::size_t j = 2; j < theta.size(); ++j) EXPECT_EQ(theta[j], 0.0);
    const auto back = read_onehot_amplitudes(prepare_onehot_state(x, layout), layout);
    EXPECT_NEAR(back[0], 0.6, 1e-15);
    EXPECT_NEAR(back[1], -0.8, 1e-15);
}

TEST(PrepareOneHot, RejectsUnnormalized) {
    const auto layout = make_onehot_layout(2, 1);
    try {
        prepare_onehot_state(std::vector<double>{1.0, 1.0, 0.0, 0.0}, layout);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
    }
}

TEST(RegressionMapOneHot, ZeroPhasesIsIdentity) {
    std::mt19937_64 rng(1);
    const auto t = random_standardized(3, 2, rng);
    const auto layout = onehot_layout_for(t);
    StateVector s = prepare_onehot_table(t);
    s.apply_hadamard(layout.ancilla());
    const StateVector before = s;
    apply_regression_map_onehot(s, std::vector<double>(3, 0.0), layout);
    for (std::uint64_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(s.amplitude(i) - before.amplitude(i)), 0.0, 1e-15);
}

TEST(RegressionMapOneHot, ProjectedAmplitudesAreCosineWeighted) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = random_standardized(2 + trial % 3, 1 + trial % 2, rng);
        const auto phi = random_phases(t.cols(), rng);
        const auto layout = onehot_layout_for(t);
        const StateVector s = run_pipeline(t, phi);
        double prob = 0.0;
        for (std::size_t l = 0; l < t.rows(); ++l) {
            for (std::size_t m = 0; m < t.cols(); ++m) {
                const Amplitude a = s.amplitude(qubit_mask(onehot_index(l, m, layout)));
                EXPECT_NEAR(a.real(), t(l, m) * std::cos(phi[m]), 1e-12);
                EXPECT_NEAR(a.imag(), 0.0, 1e-12);
                prob += std::pow(t(l, m) * std::cos(phi[m]), 2);
            }
        }
        EXPECT_NEAR(s.norm_squared(), prob, 1e-10);
    }
}

TEST(RegressionMapOneHot, RightAnglesCancelEverything) {
    std::mt19937_64 rng(3);
    const auto t = random_standardized(2, 1, rng);
    const StateVector s = run_pipeline(t, {kPi / 2, kPi / 2});
    EXPECT_NEAR(s.norm_squared(), 0.0, 1e-15);
}

TEST(RegressionMapOneHot, GateModelsAgree) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = random_standardized(2 + trial % 2, 1 + trial % 3, rng);
        const auto phi = random_phases(t.cols(), rng);
        const StateVector d = run_pipeline(t, phi);
        for (MapOptions opt : {MapOptions{MapModel::local, 1}, MapOptions{MapModel::global, 1},
                               MapOptions{MapModel::global, 2}, MapOptions{MapModel::global, 10}}) {
            const StateVector o = run_pipeline(t, phi, opt);
            for (std::uint64_t i = 0; i < d.dim(); ++i) EXPECT_NEAR(std::abs(d.amplitude(i) - o.amplitude(i)), 0.0, 1e-12);
        }
    }
}

TEST(RegressionMapOneHot, LayoutMismatch) {
    const auto layout = make_onehot_layout(2, 1);
    StateVector wrong(3);
    EXPECT_THROW(apply_regression_map_onehot(wrong, std::vector<double>{0.1, 0.2}, layout), Error);
    StateVector s(layout.n_qubits());
    EXPECT_THROW(apply_regression_map_onehot(s, std::vector<double>{0.1}, layout), Error);
}

TEST(ExpectationOneHot, PipelineIdentityBothPaths) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t L = 1 + trial % 4;
        const std::size_t M = trial % 3;
        if (L < 2) continue;
        const auto t = random_standardized(L, M, rng);
        const auto phi = random_phases(M + 1, rng);
        const auto layout = onehot_layout_for(t);
        const StateVector s = run_pipeline(t, phi);
        const double want = classical_expectation(t, phi);
        EXPECT_NEAR(expectation_M_onehot(s, layout), want, 1e-10);
        EXPECT_NEAR(expectation_M_onehot_pauli(s, layout), want, 1e-10);
    }
}

TEST(ExpectationOneHot, NullAndPerfectModels) {
    // Null model: phi_0 = pi, features at pi/2 -> sum_l y_l^2.
    std::mt19937_64 rng(6);
    const auto t = random_standardized(3, 2, rng);
    const auto layout = onehot_layout_for(t);
    double yy = 0.0;
    for (std::size_t l = 0; l < 3; ++l) yy += t(l, 0) * t(l, 0);
    EXPECT_NEAR(expectation_M_onehot(run_pipeline(t, {kPi, kPi / 2, kPi / 2}), layout), yy, 1e-12);
    EXPECT_NEAR(yy, 1.0 / 3.0, 1e-12);

    // Perfect model: y = x1 + 0.5 x2 in standardized units, phases cos phi_m = W_m.
    const DataTable raw(4, 3, {1.5, 1.0, 1.0, -1.0, -1.0, 0.0, 0.5, 0.0, 1.0, -1.0, 0.0, -2.0});
    const auto [s, n] = standardize(raw);
    // Weights in standardized units: W_std = W_raw * s_m / s_0.
    const double w1 = 1.0 * s.metadata().column_scales[1] / s.metadata().column_scales[0];
    const double w2 = 0.5 * s.metadata().column_scales[2] / s.metadata().column_scales[0];
    ASSERT_LE(std::abs(w1), 1.0);
    ASSERT_LE(std::abs(w2), 1.0);
    const auto pl = onehot_layout_for(s);
    EXPECT_NEAR(expectation_M_onehot(run_pipeline(s, {kPi, std::acos(w1), std::acos(w2)}), pl), 0.0, 1e-14);
}

TEST(ExpectationOneHot, MatchesMeanSquaredError) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = random_standardized(2, 1, rng);
        const auto phi = random_phases(2, rng);
        const double w = -std::cos(phi[1]) / std::cos(phi[0]);
        double sse = 0.0;
        for (std::size_t l = 0; l < 2; ++l) sse += std::pow(t(l, 0) - t(l, 1) * w, 2);
        const double e = expectation_M_onehot(run_pipeline(t, phi), onehot_layout_for(t));
        EXPECT_NEAR(e, std::pow(std::cos(phi[0]), 2) * sse, 1e-10);
    }
}

TEST(ExpectationOneHot, SupportViolation) {
    const auto layout = make_onehot_layout(2, 1);
    const StateVector vacuum(layout.n_qubits());
    try {
        expectation_M_onehot(vacuum, layout);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SupportViolation);
    }
    EXPECT_THROW(expectation_M_onehot_pauli(vacuum, layout), Error);
    EXPECT_EQ(onehot_measurement_terms(layout), 1u + 2u * 1u * 2u);
}

TEST(ReadoutOneHot, ZeroErrorMatchesIdeal) {
    std::mt19937_64 rng(8);
    const auto t = random_standardized(3, 1, rng);
    const auto phi = random_phases(2, rng);
    const StateVector s = run_pipeline(t, phi);
    const auto layout = onehot_layout_for(t);
    EXPECT_NEAR(readout_error_expectation_onehot(s, 0.0, layout), expectation_M_onehot(s, layout), 1e-12);
    EXPECT_THROW(readout_error_expectation_onehot(s, -0.1, layout), Error);
    EXPECT_THROW(readout_error_expectation_onehot(s, 1.5, layout), Error);
}

TEST(ReadoutOneHot, BruteForceFlipPatterns) {
    std::mt19937_64 rng(9);
    for (double delta : {0.5, 0.2, 0.01}) {
        const auto t = random_standardized(2, 2, rng);  // K = 6
        const auto phi = random_phases(3, rng);
        const auto layout = onehot_layout_for(t);
        const StateVector s = run_pipeline(t, phi);

        // Rotate each row block with a freshly computed Givens chain.
        StateVector r = s;
        const std::size_t C = 3;
        for (std::size_t l = 0; l < 2; ++l) {
            for (std::size_t k = C - 1; k-- > 0;) {
                const double theta = std::atan2(std::sqrt(static_cast<double>(C - k - 1)), 1.0);
                r.apply_givens(l * C + k, l * C + k + 1, -theta);
            }
        }
        double hit = 0.0;
        const std::uint64_t K = 6;
        for (std::uint64_t flips = 0; flips < (1u << K); ++flips) {
            const int d = std::popcount(flips);
            const double w = std::pow(delta, d) * std::pow(1.0 - delta, static_cast<int>(K) - d);
            for (std::uint64_t i = 0; i < r.dim(); ++i) {
                const std::uint64_t read = (i ^ flips) & 0x3F;
                if (read == 1u || read == 8u) hit += w * std::norm(r.amplitude(i));
            }
        }
        EXPECT_NEAR(readout_error_expectation_onehot(s, delta, layout), 3.0 * hit, 1e-12) << delta;
        if (delta == 0.5) {
            EXPECT_NEAR(3.0 * hit, 3.0 * 2.0 * s.norm_squared() / 64.0, 1e-12);
        }
    }
}

TEST(ReadoutOneHot, SlopeEqualsDataQubitCount) {
    std::mt19937_64 rng(10);
    for (auto [L, M] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}, std::pair{4, 2}, std::pair{3, 3}}) {
        const auto t = random_standardized(L, M, rng);
        const auto phi = random_phases(M + 1, rng);
        const auto layout = onehot_layout_for(t);
        const StateVector s = run_pipeline(t, phi);
        const double e0 = expectation_M_onehot(s, layout);
        const double d = 1e-4;
        const double slope = (e0 - readout_error_expectation_onehot(s, d, layout)) / (e0 * d);
        const double K = static_cast<double>(L * (M + 1));
        EXPECT_NEAR(slope / K, 1.0, 0.05) << L << "x" << M;
    }
}

TEST(ShotsOneHot, ConvergesAndSingleShotSupport) {
    std::mt19937_64 rng(11);
    const auto t = random_standardized(2, 1, rng);
    const auto phi = random_phases(2, rng);
    const auto layout = onehot_layout_for(t);
    const StateVector s = run_pipeline(t, phi);
    const double exact = expectation_M_onehot(s, layout);
    const auto est = sample_shots_onehot(s, 200000, 0.0, 5, layout);
    EXPECT_LT(std::abs(est.estimate - exact), 3.0 * est.std_error + 1e-12);
    EXPECT_EQ(est.misread_signal_shots, 0u);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto one = sample_shots_onehot(s, 1, 0.0, seed, layout);
        EXPECT_TRUE(one.estimate == 0.0 || one.estimate == 2.0);
    }
    const auto a = sample_shots_onehot(s, 1000, 0.01, 3, layout);
    const auto b = sample_shots_onehot(s, 1000, 0.01, 3, layout);
    EXPECT_EQ(a.signal_shots, b.signal_shots);
}
