#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "xqr/error.hpp"
#include "xqr/regression.hpp"

using namespace xqr;
using namespace testing_helpers;

namespace {

constexpr double kPi = std::numbers::pi;

// Least squares through the normal equations, Gaussian elimination with pivoting.
std::vector<double> ols(const DataTable& t) {
    const std::size_t M = t.features();
    std::vector<std::vector<double>> a(M, std::vector<double>(M + 1, 0.0));
    for (std::size_t l = 0; l < t.rows(); ++l) {
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t k = 0; k < M; ++k) a[i][k] += t(l, i + 1) * t(l, k + 1);
            a[i][M] += t(l, i + 1) * t(l, 0);
        }
    }
    for (std::size_t c = 0; c < M; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < M; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        for (std::size_t r = 0; r < M; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= M; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> w(M);
    for (std::size_t i = 0; i < M; ++i) w[i] = a[i][M] / a[i][i];
    return w;
}

}  // namespace

TEST(PhaseProgram, WeightsRoundTrip) {
    const std::vector<double> w = {0.3, -0.9, 0.0, 1.0};
    const auto p = PhaseProgram::from_weights(w);
    const auto back = p.weights();
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(back[i], w[i], 1e-12);
    const auto scaled = PhaseProgram::from_weights(std::vector<double>{2.5, -4.0}, 5.0);
    EXPECT_NEAR(scaled.weights()[0], 2.5, 1e-12);
    EXPECT_NEAR(scaled.weights()[1], -4.0, 1e-12);
    const auto phases = scaled.circuit_phases();
    EXPECT_NEAR(std::cos(phases[0]), -1.0 / 5.0, 1e-12);
}

TEST(PhaseProgram, WeightOutOfScale) {
    try {
        PhaseProgram::from_weights(std::vector<double>{1.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WeightOutOfScale);
    }
    PhaseProgram p;
    p.response_angle = 0.0;
    p.weight_scale = 0.5;
    p.feature_angles = {0.1};
    EXPECT_THROW(p.circuit_phases(), Error);
}

TEST(AnalyticCost, HandExamples) {
    const DataTable t(2, 2, {1.0, 1.0, 2.0, 1.0});
    // residuals W - 1, W - 2
    EXPECT_DOUBLE_EQ(analytic_cost(t, std::vector<double>{0.0}), 5.0);
    EXPECT_DOUBLE_EQ(analytic_cost(t, std::vector<double>{1.0}), 1.0);
    EXPECT_DOUBLE_EQ(analytic_cost(t, std::vector<double>{1.5}), 0.5);
    EXPECT_DOUBLE_EQ(analytic_cost(t, std::vector<double>{-1.0}, 0.5, 0.25), 4.0 + 9.0 + 0.5 + 0.25);
    EXPECT_THROW(analytic_cost(t, std::vector<double>{1.0, 2.0}), Error);
}

TEST(AnalyticCost, NullCostOfStandardizedTableIsOneOverColumns) {
    std::mt19937_64 rng(1);
    for (std::size_t M = 1; M <= 6; ++M) {
        const auto t = random_standardized(20, M, rng);
        EXPECT_NEAR(analytic_cost(t, std::vector<double>(M, 0.0)), 1.0 / static_cast<double>(M + 1), 1e-12);
    }
}

TEST(GramCost, MatchesDirectSum) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = random_raw_table(7, 4, rng);
        const GramCost g(t);
        const auto w = random_phases(3, rng);
        EXPECT_NEAR(g(w, 0.1, 0.2), analytic_cost(t, w, 0.1, 0.2), 1e-10);
    }
}

TEST(QuantumCost, ExactPathMatchesAnalyticBothEncoders) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t M = 1 + trial % 3;
        const auto t = random_standardized(2 + trial % 3, M, rng);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> w(M);
        for (double& v : w) v = 2.0 * u(rng);
        const double s = 2.0;
        const auto program = PhaseProgram::from_weights(w, s);
        const double want = analytic_cost(t, w, 0.01, 0.02);
        for (Encoder enc : {Encoder::onehot, Encoder::binary}) {
            RegressionConfig cfg;
            cfg.path = CostPath::quantum_exact;
            cfg.encoder = enc;
            cfg.alpha = 0.01;
            cfg.beta = 0.02;
            EXPECT_NEAR(quantum_cost(t, program, cfg), want, 1e-9) << to_string(enc);
        }
    }
}

TEST(QuantumCost, ShotsAgreeWithExact) {
    std::mt19937_64 rng(4);
    const auto t = random_standardized(3, 1, rng);
    const auto program = PhaseProgram::from_weights(std::vector<double>{0.4});
    RegressionConfig cfg;
    cfg.path = CostPath::quantum_exact;
    const double exact = quantum_cost(t, program, cfg);
    cfg.path = CostPath::quantum_shots;
    cfg.shots = 400000;
    cfg.seed = 9;
    // Relative shot noise on <M> for this size is well under 5%.
    EXPECT_NEAR(quantum_cost(t, program, cfg) / exact, 1.0, 0.05);
}

TEST(Gradient, MatchesFiniteDifferences) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t M = 1 + trial % 4;
        const auto t = random_standardized(4, M, rng);
        PhaseProgram p;
        p.response_angle = kPi + 0.3 * (trial % 3);
        p.weight_scale = 1.0 + 0.5 * (trial % 2);
        p.feature_angles = random_phases(M, rng);
        const auto g = analytic_gradient(t, p);
        const double h = 1e-6;
        for (std::size_t m = 0; m < M; ++m) {
            PhaseProgram a = p;
            PhaseProgram b = p;
            a.feature_angles[m] += h;
            b.feature_angles[m] -= h;
            const double fd = (phase_cost(t, a) - phase_cost(t, b)) / (2 * h);
            EXPECT_NEAR(g[m], fd, 1e-6 * (1.0 + std::abs(fd)));
        }
    }
}

TEST(Gradient, VanishesAtZeroAndPi) {
    std::mt19937_64 rng(6);
    const auto t = random_standardized(5, 3, rng);
    PhaseProgram p;
    p.feature_angles = {0.0, kPi, 0.0};
    for (double v : analytic_gradient(t, p)) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(Train, RecoversExactWeights) {
    // y = 0.5 x1 - 0.25 x2 with no noise, standardized.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v;
    for (int l = 0; l < 30; ++l) {
        const double x1 = u(rng);
        const double x2 = u(rng);
        v.insert(v.end(), {0.5 * x1 - 0.25 * x2, x1, x2});
    }
    const auto t = standardize(DataTable(30, 3, v)).table;
    const auto want = ols(t);
    // 30 x 3 is beyond a one-hot simulation; the compact encoding needs 8 qubits.
    for (CostPath path : {CostPath::analytic, CostPath::quantum_exact}) {
        RegressionConfig cfg;
        cfg.path = path;
        cfg.encoder = Encoder::binary;
        const auto m = train(t, cfg);
        for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(m.weights[i], want[i], 1e-5) << to_string(path);
        EXPECT_NEAR(m.cost, 0.0, 1e-9);
        const auto raw = t.to_raw_weights(m.weights);
        EXPECT_NEAR(raw[0], 0.5, 1e-4);
        EXPECT_NEAR(raw[1], -0.25, 1e-4);
    }
}

TEST(Train, QuantumPathHandlesLargeWeights) {
    // Raw weights well above one survive through the weight scale.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v;
    for (int l = 0; l < 12; ++l) {
        const double x1 = g(rng);
        const double x2 = 0.1 * g(rng);
        v.insert(v.end(), {3.0 * x1 + 20.0 * x2 + 0.01 * g(rng), x1, x2});
    }
    const auto t = normalize_globally(DataTable(12, 3, v)).table;
    const auto want = ols(t);
    RegressionConfig cfg;
    cfg.path = CostPath::quantum_exact;
    cfg.encoder = Encoder::binary;
    const auto m = train(t, cfg);
    EXPECT_GT(m.weight_scale, 1.0);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(m.weights[i], want[i], 1e-4 * (1 + std::abs(want[i])));
}

TEST(Train, OneHotQuantumPathMatchesAnalytic) {
    std::mt19937_64 rng(12);
    const auto t = random_standardized(4, 2, rng);
    RegressionConfig cfg;
    const auto a = train(t, cfg);
    cfg.path = CostPath::quantum_exact;
    const auto q = train(t, cfg);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(q.weights[i], a.weights[i], 1e-5);
    EXPECT_NEAR(q.cost, a.cost, 1e-10);
}

TEST(Train, LassoShrinksWeights) {
    std::mt19937_64 rng(9);
    const auto t = random_standardized(40, 4, rng);
    RegressionConfig cfg;
    const auto plain = train(t, cfg);
    cfg.alpha = 10.0;
    const auto heavy = train(t, cfg);
    for (double w : heavy.weights) EXPECT_NEAR(w, 0.0, 1e-6);
    double n0 = 0, n1 = 0;
    for (double w : plain.weights) n0 += std::abs(w);
    for (double w : heavy.weights) n1 += std::abs(w);
    EXPECT_LT(n1, n0);
}

TEST(Train, RidgeIsContinuousAtZero) {
    std::mt19937_64 rng(10);
    const auto t = random_standardized(25, 3, rng);
    RegressionConfig cfg;
    const auto base = train(t, cfg);
    cfg.beta = 1e-9;
    const auto tiny = train(t, cfg);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(tiny.weights[i], base.weights[i], 1e-5);
    cfg.beta = 1.0;
    const auto big = train(t, cfg);
    double n0 = 0, n1 = 0;
    for (double w : base.weights) n0 += w * w;
    for (double w : big.weights) n1 += w * w;
    EXPECT_LT(n1, n0);
}

TEST(Train, Errors) {
    const DataTable y_only(3, 1, {1.0, 2.0, 3.0});
    EXPECT_THROW(train(y_only, {}), Error);
    RegressionConfig cfg;
    cfg.alpha = -1.0;
    EXPECT_THROW(train(DataTable(2, 2, {1, 2, 3, 4}), cfg), Error);
    cfg.alpha = 0.0;
    cfg.initial_weights = {1.0, 2.0};
    EXPECT_THROW(train(DataTable(2, 2, {1, 2, 3, 4}), cfg), Error);
}

TEST(Model, JsonRoundTripAndPredict) {
    RegressionModel m;
    m.weights = {0.5, -2.0};
    m.cost = 0.125;
    m.trace = {1.0, 0.125};
    m.weight_scale = 2.5;
    m.evaluations = 42;
    const auto back = RegressionModel::from_json(m.to_json());
    EXPECT_EQ(back.weights, m.weights);
    EXPECT_EQ(back.cost, m.cost);
    EXPECT_EQ(back.trace, m.trace);
    EXPECT_EQ(back.evaluations, 42u);
    EXPECT_DOUBLE_EQ(predict(m, std::vector<double>{2.0, 1.0}), -1.0);
    EXPECT_THROW(predict(m, std::vector<double>{1.0}), Error);
    EXPECT_THROW(RegressionModel::from_json(nlohmann::json::parse("{\"weights\": 3}")), Error);
}

TEST(Names, RoundTrip) {
    for (CostPath p : {CostPath::analytic, CostPath::quantum_exact, CostPath::quantum_shots})
        EXPECT_EQ(cost_path_from_string(to_string(p)), p);
    for (Encoder e : {Encoder::onehot, Encoder::binary}) EXPECT_EQ(encoder_from_string(to_string(e)), e);
    EXPECT_THROW(encoder_from_string("ternary"), Error);
}
