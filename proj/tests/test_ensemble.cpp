#include <gtest/gtest.h>

#include <cmath>

#include "xqr/ensemble.hpp"
#include "xqr/error.hpp"

using namespace xqr;

namespace {

DataTable linear_master(double noise, std::uint64_t seed, std::size_t rows = 600, std::size_t features = 3) {
    SyntheticSpec spec;
    spec.rows = rows;
    spec.features = features;
    spec.noise = noise;
    spec.seed = seed;
    return generate_linear_synthetic(spec);
}

}  // namespace

TEST(Ensemble, IdenticalBatchesGiveInfiniteT) {
    const auto master = linear_master(0.5, 1);
    EnsembleOptions opt;
    opt.batches = 8;
    opt.batch_size = 50;
    opt.force_identical_batches = true;
    opt.workers = 2;
    const auto r = train_ensemble(master, {}, opt);
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_EQ(r.std_error[m], 0.0);
        EXPECT_TRUE(std::isinf(r.t_statistic[m]));
        EXPECT_EQ(r.t_statistic[m] > 0, r.mean[m] > 0);
    }
    const auto j = r.to_json();
    EXPECT_TRUE(j["t_statistic"][0].is_string());
}

TEST(Ensemble, MeansTrackGeneratingWeights) {
    const auto master = linear_master(0.3, 2, 2000);
    EnsembleOptions opt;
    opt.batches = 64;
    opt.batch_size = 150;
    opt.seed = 5;
    const auto r = train_ensemble(master, {}, opt);
    ASSERT_EQ(r.mean.size(), 3u);
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_NEAR(r.mean[m], static_cast<double>(m + 1), 0.1) << m;
        EXPECT_GT(r.std_error[m], 0.0);
        EXPECT_NEAR(r.t_statistic[m], r.mean[m] / r.std_error[m], 1e-12);
    }
    for (double d : r.duplicate_fraction) {
        EXPECT_GE(d, 0.0);
        EXPECT_LT(d, 0.2);
    }
}

TEST(Ensemble, StandardizationModesAgreeOnRawWeights) {
    const auto master = linear_master(0.0, 3, 300);
    EnsembleOptions opt;
    opt.batches = 4;
    opt.batch_size = 100;
    for (auto mode : {StandardizationMode::per_batch, StandardizationMode::master}) {
        opt.standardization = mode;
        const auto r = train_ensemble(master, {}, opt);
        for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(r.mean[m], static_cast<double>(m + 1), 1e-4);
    }
}

TEST(Ensemble, IndependentOfWorkerCount) {
    const auto master = linear_master(0.4, 4, 400);
    EnsembleOptions opt;
    opt.batches = 12;
    opt.batch_size = 40;
    opt.seed = 11;
    opt.workers = 1;
    const auto a = train_ensemble(master, {}, opt);
    opt.workers = 4;
    const auto b = train_ensemble(master, {}, opt);
    EXPECT_EQ(a.batch_weights, b.batch_weights);
    EXPECT_EQ(a.mean, b.mean);
}

TEST(Ensemble, ErrorsNameTheBatch) {
    // A constant feature cannot be standardized in any batch.
    std::vector<double> v;
    for (int l = 0; l < 20; ++l) v.insert(v.end(), {static_cast<double>(l), 1.0});
    EnsembleOptions opt;
    opt.batches = 3;
    opt.batch_size = 10;
    opt.workers = 1;
    try {
        train_ensemble(DataTable(20, 2, v), {}, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConstantColumn);
        EXPECT_NE(std::string(e.what()).find("batch 0"), std::string::npos);
    }
    opt.batches = 1;
    EXPECT_THROW(train_ensemble(linear_master(0, 1), {}, opt), Error);
}

TEST(NullProbability, HandTable) {
    // y deviations +-1 (ss 2), x deviations +-2 (ss 8): Pr0 = 2 / 10.
    const DataTable t(2, 2, {1.0, 2.0, -1.0, -2.0});
    EXPECT_NEAR(success_probability_null(t), 0.2, 1e-15);
    EXPECT_NEAR(success_probability_null(t, std::acos(0.5)), 0.05, 1e-15);
    EXPECT_THROW(success_probability_null(DataTable(2, 2, {1.0, 1.0, 1.0, 1.0})), Error);
}

TEST(NullProbability, StandardizedTableGivesOneOverColumns) {
    const auto t = standardize(linear_master(0.2, 6, 100, 4)).table;
    EXPECT_NEAR(success_probability_null(t), 0.2, 1e-12);
}

TEST(Goodness, Landmarks) {
    EXPECT_DOUBLE_EQ(goodness(0.3, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(goodness(0.0, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(goodness(0.15, 0.3), 0.5);
    try {
        goodness(0.1, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NullProbabilityZero);
    }
}

TEST(MinimalShots, Examples) {
    EXPECT_EQ(minimal_shots(1.0, 0.0), 1u);
    EXPECT_EQ(minimal_shots(1.0 / 7.0, 0.0), 7u);
    EXPECT_EQ(minimal_shots(1.0 / 7.0, 0.01), 8u);
    EXPECT_EQ(minimal_shots(0.25, 0.5), 8u);
    EXPECT_THROW(minimal_shots(0.0, 0.0), Error);
    EXPECT_THROW(minimal_shots(0.5, 1.0), Error);
}

TEST(ReadoutBudget, Examples) {
    EXPECT_NEAR(readout_error_budget(Encoder::onehot, 10, 2, 0.01), 0.3, 1e-15);
    EXPECT_NEAR(readout_error_budget(Encoder::binary, 10, 2, 0.01), 0.06, 1e-15);
    EXPECT_NEAR(readout_error_budget(Encoder::binary, 1024, 7, 1e-3), 0.013, 1e-15);
    EXPECT_THROW(readout_error_budget(Encoder::onehot, 2, 1, -0.1), Error);
}
