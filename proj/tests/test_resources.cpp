#include <gtest/gtest.h>

#include <cmath>

#include "xqr/binary.hpp"
#include "xqr/error.hpp"
#include "xqr/onehot.hpp"
#include "xqr/resources.hpp"

using namespace xqr;

namespace {

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Memory with every value 0.5 on an L x (M+1) table; the counts do not depend on the values.
MemoryRegister flat_memory(std::size_t L, std::size_t M, std::size_t np) {
    MemoryRegister mem;
    mem.scale = 1.0;
    mem.precision_bits = np;
    mem.rows = L;
    mem.features = M;
    mem.values.assign(L * (M + 1), digitize(0.5, 1.0, np));
    return mem;
}

}  // namespace

TEST(Resources, OneHotExamples) {
    const auto e = estimate(Encoder::onehot, 4, 2);
    EXPECT_EQ(e.qubits, 13u);
    EXPECT_EQ(e.prep_gates, 11u);
    EXPECT_EQ(e.map_gates, 3u);
    EXPECT_EQ(e.measurement_terms, 1u + 4u * 2u * 3u);
    ResourceOptions local;
    local.gates = GateModel::local;
    EXPECT_EQ(estimate(Encoder::onehot, 4, 2, local).map_gates, 36u);
    ResourceOptions fused;
    fused.columns_per_pulse = 2;
    EXPECT_EQ(estimate(Encoder::onehot, 4, 2, fused).map_gates, 2u);
}

TEST(Resources, BinaryExamples) {
    ResourceOptions opt;
    opt.precision_bits = 12;
    const auto e = estimate(Encoder::binary, 4, 2, opt);  // N_L = 2, N_M = 2
    EXPECT_EQ(e.qubits, 5u);
    EXPECT_EQ(e.prep_gates, 12u * 12u * 16u);
    EXPECT_EQ(e.map_gates, 4u * 3u);
    EXPECT_EQ(e.measurement_terms, 4u);
    opt.count_memory_qubits = true;
    EXPECT_EQ(estimate(Encoder::binary, 4, 2, opt).qubits, 5u + 12u * 12u);
    opt.count_memory_qubits = false;
    opt.memory = MemoryModel::classical;
    opt.gates = GateModel::local;
    const auto l = estimate(Encoder::binary, 4, 2, opt);
    EXPECT_EQ(l.prep_gates, 12u * 16u * 5u);
    EXPECT_EQ(l.map_gates, 4u * 3u * 3u);
    const auto j = l.to_json();
    EXPECT_EQ(j["encoding"], "binary");
    EXPECT_EQ(j["gate_model"], "local");
}

TEST(Resources, Errors) {
    EXPECT_THROW(estimate(Encoder::onehot, 0, 2), Error);
    EXPECT_THROW(estimate(Encoder::binary, 2, 0), Error);
    ResourceOptions opt;
    opt.precision_bits = 0;
    EXPECT_THROW(estimate(Encoder::binary, 2, 2, opt), Error);
    EXPECT_THROW(compare_cost_ratio(1, 4, 12), Error);
    EXPECT_THROW(gate_model_from_string("semi"), Error);
    EXPECT_EQ(gate_model_from_string("local"), GateModel::local);
}

TEST(Resources, OneHotCountersMatchClosedForms) {
    for (std::size_t L = 1; L <= 8; ++L) {
        for (std::size_t M = 1; M <= 8; ++M) {
            const auto layout = make_onehot_layout(L, M);
            for (std::size_t cpp : {1u, 2u, 3u}) {
                ResourceOptions opt;
                opt.columns_per_pulse = cpp;
                const auto g = estimate(Encoder::onehot, L, M, opt);
                const auto cg = onehot_circuit_counts(layout, {MapModel::global, cpp});
                EXPECT_EQ(cg.prep.gadgets, g.prep_gates);
                EXPECT_EQ(cg.map.phase_pulses, g.map_gates);
                EXPECT_EQ(layout.n_qubits(), g.qubits);
                EXPECT_EQ(onehot_measurement_terms(layout), g.measurement_terms);
            }
            ResourceOptions opt;
            opt.gates = GateModel::local;
            const auto l = estimate(Encoder::onehot, L, M, opt);
            const auto cl = onehot_circuit_counts(layout, {MapModel::local, 1});
            EXPECT_EQ(cl.map.z_rotations, l.map_gates);
            EXPECT_EQ(cl.prep.gadgets, l.prep_gates);
        }
    }
}

TEST(Resources, BinaryCountersMatchClosedForms) {
    const std::size_t np = 2;
    for (std::size_t L = 1; L <= 8; L += 3) {
        for (std::size_t M = 1; M <= 8; M += 2) {
            const auto layout = make_binary_layout(L, M);
            const auto mem = flat_memory(L, M, np);
            for (auto gates : {GateModel::global, GateModel::local}) {
                for (auto memory : {MemoryModel::quantum, MemoryModel::classical}) {
                    ResourceOptions opt;
                    opt.precision_bits = np;
                    opt.gates = gates;
                    opt.memory = memory;
                    const auto e = estimate(Encoder::binary, L, M, opt);
                    const auto prep = prepare_binary_state_full(mem, layout, {memory, gates});
                    const auto& pc = prep.state.counts();
                    EXPECT_EQ(pc.z_rotations + pc.cnots, e.prep_gates) << L << "x" << M;
                    EXPECT_EQ(prep.state.n_qubits(), e.qubits);

                    StateVector s = prep.state;
                    s.reset_counts();
                    apply_regression_map_binary(s, std::vector<double>(M + 1, 0.3), layout,
                                                {BinaryMapModel::pauli, gates});
                    EXPECT_EQ(s.counts().z_rotations + s.counts().cnots, e.map_gates) << L << "x" << M;
                }
            }
        }
    }
}

TEST(Resources, CostRatioGrowsWithLogSize) {
    std::vector<double> x, y;
    for (std::size_t L : {4u, 16u, 64u, 256u, 1024u}) {
        for (std::size_t M : {3u, 7u, 15u}) {
            x.push_back(std::log2(static_cast<double>(L * M)));
            y.push_back(compare_cost_ratio(L, M, 12));
        }
    }
    EXPECT_GT(slope(x, y), 0.0);
    EXPECT_GT(compare_cost_ratio(1024, 15, 12), compare_cost_ratio(4, 3, 12));
}

TEST(Resources, ScalingExponentsAgainstK) {
    // One-hot space-time grows as K^2, binary prep as K^2 up to the log-sized padding.
    std::vector<double> lk, lo, lb;
    for (std::size_t L : {8u, 32u, 128u, 512u}) {
        const std::size_t M = 7;
        const double K = static_cast<double>(L * (M + 1));
        lk.push_back(std::log(K));
        lo.push_back(std::log(onehot_cost(L, M)));
        lb.push_back(std::log(static_cast<double>(estimate(Encoder::binary, L, M).prep_gates)));
    }
    EXPECT_NEAR(slope(lk, lo), 2.0, 0.05);
    EXPECT_NEAR(slope(lk, lb), 2.0, 0.05);
    EXPECT_DOUBLE_EQ(classical_cost(2, 3), 6.0 * (6.0 * 3.0 + 6.0));
}
