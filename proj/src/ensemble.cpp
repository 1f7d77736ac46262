#include "xqr/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "xqr/binary.hpp"
#include "xqr/error.hpp"
#include "xqr/rng.hpp"

namespace xqr {

nlohmann::json EnsembleReport::to_json() const {
    auto finite_or_string = [](const std::vector<double>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (double x : v) {
            if (std::isfinite(x)) {
                a.push_back(x);
            } else {
                a.push_back(x > 0 ? "inf" : "-inf");
            }
        }
        return a;
    };
    return {{"batches", batches},
            {"batch_size", batch_size},
            {"mean", mean},
            {"std_error", std_error},
            {"t_statistic", finite_or_string(t_statistic)},
            {"duplicate_fraction", duplicate_fraction}};
}

std::size_t default_workers() {
    if (const char* env = std::getenv("XQR_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleReport train_ensemble(const DataTable& master, const RegressionConfig& config, const EnsembleOptions& options) {
    if (options.batches < 2) throw Error(ErrorCode::InvalidArgument, "an ensemble needs at least two batches");
    if (options.batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch size must be at least 1");
    if (master.empty()) throw Error(ErrorCode::EmptyTable, "master table is empty");

    const std::size_t M = master.features();
    const std::size_t B = options.batches;
    const DataTable source =
        options.standardization == StandardizationMode::master ? standardize(master).table : master;

    EnsembleReport report;
    report.batches = B;
    report.batch_size = options.batch_size;
    report.batch_weights.assign(B, {});
    report.duplicate_fraction.assign(B, 0.0);

    auto run_batch = [&](std::size_t b) {
        const std::uint64_t seed = derive_seed(options.seed, options.force_identical_batches ? 0 : b);
        const auto idx = bootstrap_indices(source.rows(), options.batch_size, seed);
        report.duplicate_fraction[b] = duplicate_fraction(idx);
        const DataTable sample = select_rows(source, idx);
        const DataTable fit_table =
            options.standardization == StandardizationMode::per_batch ? standardize(sample).table : sample;
        RegressionConfig cfg = config;
        cfg.seed = derive_seed(config.seed, b);
        const RegressionModel model = train(fit_table, cfg);
        report.batch_weights[b] = fit_table.to_raw_weights(model.weights);
    };

    const std::size_t workers = std::min(B, options.workers ? options.workers : default_workers());
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_batch = B;
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t b = next++; b < B; b = next++) {
            try {
                run_batch(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (b < failed_batch) {
                    failed_batch = b;
                    failure = std::current_exception();
                }
                next = B;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw Error(e.code(), "batch " + std::to_string(failed_batch) + ": " + e.message());
        }
    }

    // Reduction keyed by batch index, so the result does not depend on scheduling.
    report.mean.assign(M, 0.0);
    report.std_error.assign(M, 0.0);
    report.t_statistic.assign(M, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
        // Shifted by the first batch so identical batches give exactly zero spread.
        const double shift = report.batch_weights[0][m];
        double s = 0.0;
        for (std::size_t b = 0; b < B; ++b) s += report.batch_weights[b][m] - shift;
        const double mean = shift + s / static_cast<double>(B);
        double ss = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
            const double d = report.batch_weights[b][m] - mean;
            ss += d * d;
        }
        const double se = std::sqrt(ss / static_cast<double>(B - 1));
        report.mean[m] = mean;
        report.std_error[m] = se;
        if (se > 0.0) {
            report.t_statistic[m] = mean / se;
        } else {
            report.t_statistic[m] = mean < 0.0 ? -kInfiniteT : kInfiniteT;
        }
    }
    return report;
}

double success_probability_null(const DataTable& table, double response_angle) {
    if (table.empty()) throw Error(ErrorCode::EmptyTable, "empty table");
    double var_y = 0.0;
    double var_x = 0.0;
    for (std::size_t m = 0; m < table.cols(); ++m) {
        const auto col = table.column(m);
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(col.size());
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        (m == 0 ? var_y : var_x) += ss;
    }
    if (var_y + var_x == 0.0) throw Error(ErrorCode::ZeroVariance, "every column has zero variance");
    const double c = std::cos(response_angle);
    return c * c * var_y / (var_y + var_x);
}

double goodness(double pr_model, double pr_null) {
    if (!(pr_null > 0.0)) throw Error(ErrorCode::NullProbabilityZero, "null-model probability must be positive");
    return 1.0 - pr_model / pr_null;
}

std::size_t minimal_shots(double pr_null, double delta_eps) {
    if (!(pr_null > 0.0 && pr_null <= 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "Pr_0 = " + format_double(pr_null) + " outside (0,1]");
    }
    if (!(delta_eps >= 0.0 && delta_eps < 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "error rate " + format_double(delta_eps) + " outside [0,1)");
    }
    const double n = 1.0 / (pr_null * (1.0 - delta_eps));
    // Guard against 1/(1/7) landing a hair above 7.
    return static_cast<std::size_t>(std::ceil(n * (1.0 - 1e-12)));
}

double readout_error_budget(Encoder encoding, std::size_t rows, std::size_t features, double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "readout error " + format_double(delta) + " outside [0,1)");
    }
    if (encoding == Encoder::onehot) return static_cast<double>(rows * (features + 1)) * delta;
    return static_cast<double>(ceil_log2(rows) + ceil_log2(features + 1)) * delta;
}

}  // namespace xqr
