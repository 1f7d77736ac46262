// xqr: batch runner for data generation, training, ensembles, table
// reproduction, the sine demo, resource reports and one-off measurements.
//
// Primary output goes to --out (or stdout). Human-readable notes go to
// stdout when --out is set and to stderr otherwise, so piping stays clean.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xqr/data_table.hpp"
#include "xqr/ensemble.hpp"
#include "xqr/error.hpp"
#include "xqr/regression.hpp"
#include "xqr/resources.hpp"
#include "xqr/rng.hpp"

using nlohmann::json;
using namespace xqr;

namespace {

// 1 is left for unexpected failures.
enum Exit { kOk = 0, kUsage = 2, kValidation = 3, kNumerical = 4, kIO = 5 };

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError: return kUsage;
        case ErrorCode::IOFailure: return kIO;
        case ErrorCode::ZeroNorm:
        case ErrorCode::NotNormalized:
        case ErrorCode::NonFiniteObjective:
        case ErrorCode::ZeroVariance:
        case ErrorCode::NullProbabilityZero: return kNumerical;
        default: return kValidation;
    }
}

// Everything a run depends on. Serialized into every output.
struct ExperimentConfig {
    std::string command;

    std::string input;  // CSV; empty: generate from the dataset fields
    std::string dataset = "linear";
    std::size_t rows = 1024;
    std::size_t features = 6;
    double noise = 0.0;
    std::size_t sine_rows = 32;
    std::size_t degree = 15;
    std::string normalize = "global";

    std::string encoder = "onehot";
    std::string cost = "analytic";
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t shots = 100000;
    double readout_error = 0.0;
    double weight_scale = 0.0;  // 0: automatic
    std::size_t max_restarts = 50;
    std::vector<double> init;
    std::vector<double> weights;

    std::size_t batches = 1024;
    std::size_t batch_size = 150;
    std::vector<std::size_t> batch_sizes = {10, 20, 40, 60, 100, 150};
    std::string standardization = "per-batch";
    std::size_t workers = 0;  // 0: XQR_WORKERS or hardware concurrency

    int table = 3;

    std::vector<std::size_t> grid_rows;
    std::vector<std::size_t> grid_features;
    std::vector<std::string> encodings = {"onehot", "binary"};
    std::size_t precision_bits = 12;
    std::string gates = "global";
    std::string memory = "quantum";
    std::size_t columns_per_pulse = 1;

    std::uint64_t seed = 0;
    std::string out;
    std::string format;

    json to_json() const {
        return {
            {"command", command},
            {"data", {{"input", input}, {"dataset", dataset}, {"rows", rows}, {"features", features},
                      {"noise", noise}, {"sine_rows", sine_rows}, {"degree", degree}, {"normalize", normalize}}},
            {"regression", {{"encoder", encoder}, {"cost", cost}, {"alpha", alpha}, {"beta", beta},
                            {"shots", shots}, {"readout_error", readout_error},
                            {"weight_scale", weight_scale > 0 ? json(weight_scale) : json("auto")},
                            {"max_restarts", max_restarts}, {"init", init}, {"weights", weights}}},
            {"ensemble", {{"batches", batches}, {"batch_size", batch_size}, {"batch_sizes", batch_sizes},
                          {"standardization", standardization}, {"workers", workers}}},
            {"table", table},
            {"resources", {{"rows", grid_rows}, {"features", grid_features}, {"encodings", encodings},
                           {"precision_bits", precision_bits}, {"gates", gates}, {"memory", memory},
                           {"columns_per_pulse", columns_per_pulse}}},
            {"seed", seed},
            {"out", out},
            {"format", format},
        };
    }
};

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return format_double(v);
}

std::string fixed4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// JSON cannot hold inf; mirror the library's string convention.
json jnum(double v) {
    if (std::isfinite(v)) return v;
    return num(v);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IOFailure, "cannot write " + path);
    f << text;
    if (!f) throw Error(ErrorCode::IOFailure, "write failed for " + path);
}

std::ostream& notes(const ExperimentConfig& cfg) {
    return cfg.out.empty() ? std::cerr : std::cout;
}

std::string config_comment(const ExperimentConfig& cfg) {
    return "# config " + cfg.to_json().dump() + "\n";
}

DataTable generate(const ExperimentConfig& cfg) {
    if (cfg.dataset == "linear") {
        SyntheticSpec spec;
        spec.rows = cfg.rows;
        spec.features = cfg.features;
        spec.noise = cfg.noise;
        spec.seed = cfg.seed;
        return generate_linear_synthetic(spec);
    }
    if (cfg.dataset == "sine") return generate_sine_synthetic(cfg.sine_rows, cfg.degree, cfg.seed);
    throw Error(ErrorCode::InvalidArgument, "unknown dataset '" + cfg.dataset + "'");
}

DataTable load_raw(const ExperimentConfig& cfg) {
    return cfg.input.empty() ? generate(cfg) : read_csv_file(cfg.input);
}

DataTable prepare(const DataTable& raw, const std::string& mode) {
    if (mode == "global") return normalize_globally(raw).table;
    if (mode == "standardize") return standardize(raw).table;
    if (mode == "none") return raw;
    throw Error(ErrorCode::InvalidArgument, "unknown normalization '" + mode + "'");
}

RegressionConfig regression_config(const ExperimentConfig& cfg) {
    RegressionConfig rc;
    rc.alpha = cfg.alpha;
    rc.beta = cfg.beta;
    rc.path = cost_path_from_string(cfg.cost);
    rc.encoder = encoder_from_string(cfg.encoder);
    rc.shots = cfg.shots;
    rc.readout_error = cfg.readout_error;
    if (cfg.weight_scale > 0) rc.weight_scale = cfg.weight_scale;
    rc.initial_weights = cfg.init;
    rc.optimizer.max_restarts = cfg.max_restarts;
    rc.seed = cfg.seed;
    return rc;
}

StandardizationMode standardization_mode(const std::string& s) {
    if (s == "per-batch") return StandardizationMode::per_batch;
    if (s == "master") return StandardizationMode::master;
    throw Error(ErrorCode::InvalidArgument, "unknown standardization '" + s + "'");
}

void require_format(const ExperimentConfig& cfg) {
    if (cfg.format != "csv" && cfg.format != "json") {
        throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
    }
}

// ---------------------------------------------------------------- commands

void cmd_gen_data(const ExperimentConfig& cfg) {
    const DataTable table = generate(cfg);
    json meta = {{"config", cfg.to_json()}, {"table", {{"rows", table.rows()}, {"cols", table.cols()}}},
                 {"lineage", table.metadata().lineage}};
    if (cfg.dataset == "linear") {
        std::vector<double> w;
        for (std::size_t i = 1; i <= cfg.features; ++i) w.push_back(static_cast<double>(i));
        meta["generating_weights"] = w;
    }
    if (cfg.format == "json") {
        meta["data"] = to_json(table);
        write_text(cfg.out, meta.dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    write_csv(csv, table);
    write_text(cfg.out, csv.str());
    if (!cfg.out.empty()) write_text(cfg.out + ".meta.json", meta.dump(2) + "\n");
}

void cmd_train(const ExperimentConfig& cfg) {
    const DataTable raw = load_raw(cfg);
    const DataTable fit = prepare(raw, cfg.normalize);
    const RegressionModel model = train(fit, regression_config(cfg));
    const auto raw_w = fit.to_raw_weights(model.weights);

    std::ostringstream summary;
    summary << "trained " << fit.rows() << "x" << fit.features() << " table, path " << cfg.cost << ", encoder "
            << cfg.encoder << "\n";
    for (std::size_t m = 0; m < raw_w.size(); ++m) {
        summary << "  W" << (m + 1) << " = " << num(raw_w[m]) << "  (fit units " << num(model.weights[m]) << ")\n";
    }
    summary << "cost " << num(model.cost) << " after " << model.evaluations << " evaluations\n";
    summary << "cost trace";
    for (double c : model.trace) summary << " " << num(c);
    summary << "\n";

    if (cfg.format == "json") {
        json j = {{"config", cfg.to_json()}, {"model", model.to_json()}, {"raw_weights", raw_w},
                  {"rows", fit.rows()}, {"features", fit.features()}, {"lineage", fit.metadata().lineage}};
        write_text(cfg.out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << config_comment(cfg) << "feature,weight,raw_weight\n";
        for (std::size_t m = 0; m < raw_w.size(); ++m) {
            csv << fit.column_name(m + 1) << "," << num(model.weights[m]) << "," << num(raw_w[m]) << "\n";
        }
        write_text(cfg.out, csv.str());
    }
    notes(cfg) << summary.str();
}

EnsembleOptions ensemble_options(const ExperimentConfig& cfg, std::size_t batch_size, std::uint64_t seed) {
    EnsembleOptions opt;
    opt.batches = cfg.batches;
    opt.batch_size = batch_size;
    opt.standardization = standardization_mode(cfg.standardization);
    opt.seed = seed;
    opt.workers = cfg.workers;
    return opt;
}

void cmd_ensemble(const ExperimentConfig& cfg) {
    const DataTable master = load_raw(cfg);
    const auto report = train_ensemble(master, regression_config(cfg), ensemble_options(cfg, cfg.batch_size, cfg.seed));
    if (cfg.format == "json") {
        write_text(cfg.out, json({{"config", cfg.to_json()}, {"report", report.to_json()}}).dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    csv << config_comment(cfg) << "feature,mean,std_error,t_statistic\n";
    for (std::size_t m = 0; m < report.mean.size(); ++m) {
        csv << master.column_name(m + 1) << "," << num(report.mean[m]) << "," << num(report.std_error[m]) << ","
            << num(report.t_statistic[m]) << "\n";
    }
    write_text(cfg.out, csv.str());
}

// Tables 3-5: noise-free weights, SEs, t; tables 6-8: the same at noise 0.1.
void cmd_reproduce_table(const ExperimentConfig& cfg) {
    if (cfg.table < 3 || cfg.table > 8) throw Error(ErrorCode::InvalidArgument, "table must be 3..8");
    if (cfg.batch_sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no batch sizes");
    const bool noisy = cfg.table >= 6;
    const int quantity = (cfg.table - 3) % 3;  // 0 weights, 1 SE, 2 t
    const double delta = noisy ? 0.1 : 0.0;

    SyntheticSpec spec;
    spec.rows = 1024;
    spec.features = 6;
    spec.noise = delta;
    spec.seed = cfg.seed;
    const DataTable master = generate_linear_synthetic(spec);

    std::vector<EnsembleReport> reports;
    for (std::size_t size : cfg.batch_sizes) {
        reports.push_back(train_ensemble(master, regression_config(cfg),
                                         ensemble_options(cfg, size, derive_seed(cfg.seed, size))));
    }
    auto mean_t = [](const EnsembleReport& r) {
        double t = 0.0;
        for (double v : r.t_statistic) t += v / static_cast<double>(r.t_statistic.size());
        return t;
    };
    double best_small_t = -kInfiniteT;
    for (std::size_t i = 0; i < cfg.batch_sizes.size(); ++i) {
        if (cfg.batch_sizes[i] <= 40) best_small_t = std::max(best_small_t, mean_t(reports[i]));
    }

    // Landmarks: "-" for rows the published tables make no claim about.
    auto check = [&](std::size_t i) -> std::string {
        const auto& r = reports[i];
        const std::size_t size = cfg.batch_sizes[i];
        double max_dev = 0.0, max_se = 0.0, min_t = kInfiniteT;
        bool covered = true;
        for (std::size_t m = 0; m < 6; ++m) {
            const double dev = std::abs(r.mean[m] - static_cast<double>(m + 1));
            max_dev = std::max(max_dev, dev);
            max_se = std::max(max_se, r.std_error[m]);
            min_t = std::min(min_t, r.t_statistic[m]);
            covered = covered && dev <= 3.0 * r.std_error[m];
        }
        auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };
        switch (cfg.table) {
            case 3: return size >= 60 ? verdict(max_dev < 5e-3) : "-";
            case 4: return verdict(max_se < 0.035);
            case 5: return verdict(min_t > 40.0);
            case 6: return size >= 60 ? verdict(max_dev < delta) : "-";
            case 7: return verdict(covered);
            default: return size == 150 ? verdict(mean_t(r) > best_small_t) : "-";
        }
    };
    const char* landmark[] = {"max|W-i| < 5e-3 for size >= 60", "every SE < 0.035",
                              "every t > 40",  "max|W-i| < 0.1 for size >= 60",
                              "every |W-i| <= 3 SE",  "mean t at 150 exceeds sizes 10..40"};

    auto value = [&](const EnsembleReport& r, std::size_t m) {
        return quantity == 0 ? r.mean[m] : quantity == 1 ? r.std_error[m] : r.t_statistic[m];
    };
    const char* prefix = quantity == 0 ? "W" : quantity == 1 ? "SE" : "t";

    if (cfg.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            json vals = json::array();
            for (std::size_t m = 0; m < 6; ++m) vals.push_back(jnum(value(reports[i], m)));
            rows.push_back({{"size", cfg.batch_sizes[i]}, {"values", vals}, {"check", check(i)}});
        }
        write_text(cfg.out, json({{"config", cfg.to_json()}, {"table", cfg.table}, {"noise", delta},
                                  {"quantity", prefix}, {"landmark", landmark[cfg.table - 3]}, {"rows", rows}})
                                    .dump(2) +
                                "\n");
        return;
    }
    std::ostringstream csv;
    csv << config_comment(cfg) << "# landmark " << landmark[cfg.table - 3] << "\n";
    csv << "size";
    for (int m = 1; m <= 6; ++m) csv << "," << prefix << m;
    csv << ",check\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        csv << cfg.batch_sizes[i];
        for (std::size_t m = 0; m < 6; ++m) csv << "," << num(value(reports[i], m));
        csv << "," << check(i) << "\n";
    }
    write_text(cfg.out, csv.str());
}

void cmd_sine_demo(const ExperimentConfig& cfg) {
    const DataTable fit = normalize_globally(generate_sine_synthetic(cfg.sine_rows, cfg.degree, cfg.seed)).table;
    RegressionConfig rc = regression_config(cfg);
    rc.path = CostPath::analytic;
    if (rc.initial_weights.empty()) {
        // Odd powers start at +-0.1 with alternating sign, even powers at 0.
        rc.initial_weights.assign(cfg.degree, 0.0);
        for (std::size_t k = 0; k < cfg.degree; k += 2) rc.initial_weights[k] = (k / 2) % 2 ? -0.1 : 0.1;
    }
    const auto model = train(fit, rc);
    const auto w = fit.to_raw_weights(model.weights);

    std::vector<double> xs, ys, yh;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 0.01 * i;
        double y = 0.0, p = 1.0;
        for (double wk : w) {
            p *= x;
            y += wk * p;
        }
        xs.push_back(x);
        ys.push_back(std::sin(x));
        yh.push_back(y);
        worst = std::max(worst, std::abs(y - std::sin(x)));
    }

    if (cfg.format == "json") {
        json rounded = json::array();
        for (double v : w) rounded.push_back(fixed4(v));
        write_text(cfg.out, json({{"config", cfg.to_json()}, {"weights", w}, {"weights_4dp", rounded},
                                  {"max_abs_error", worst}, {"x", xs}, {"sin_x", ys}, {"y_hat", yh}})
                                    .dump(2) +
                                "\n");
        return;
    }
    std::ostringstream csv;
    csv << config_comment(cfg) << "# weights";
    for (double v : w) csv << " " << fixed4(v);
    csv << "\n# max|y_hat - sin x| " << num(worst) << "\n";
    csv << "x,sin_x,y_hat\n";
    for (std::size_t i = 0; i < xs.size(); ++i) csv << num(xs[i]) << "," << num(ys[i]) << "," << num(yh[i]) << "\n";
    write_text(cfg.out, csv.str());
}

void cmd_resources(const ExperimentConfig& cfg) {
    if (cfg.grid_rows.empty() || cfg.grid_features.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty grid: give --grid-rows and --grid-features");
    }
    ResourceOptions opt;
    opt.precision_bits = cfg.precision_bits;
    opt.gates = gate_model_from_string(cfg.gates);
    if (cfg.memory == "quantum") {
        opt.memory = MemoryModel::quantum;
    } else if (cfg.memory == "classical") {
        opt.memory = MemoryModel::classical;
    } else {
        throw Error(ErrorCode::InvalidArgument, "memory must be quantum or classical");
    }
    opt.columns_per_pulse = cfg.columns_per_pulse;

    std::vector<ResourceEstimate> rows;
    std::vector<double> ratios;
    for (const auto& enc : cfg.encodings) {
        const Encoder e = encoder_from_string(enc);
        for (std::size_t L : cfg.grid_rows) {
            for (std::size_t M : cfg.grid_features) {
                rows.push_back(estimate(e, L, M, opt));
                ratios.push_back(L >= 2 && M >= 2 ? compare_cost_ratio(L, M, cfg.precision_bits)
                                                  : std::numeric_limits<double>::quiet_NaN());
            }
        }
    }

    if (cfg.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json j = rows[i].to_json();
            j["cost_ratio"] = std::isnan(ratios[i]) ? json(nullptr) : json(ratios[i]);
            arr.push_back(j);
        }
        write_text(cfg.out, json({{"config", cfg.to_json()}, {"estimates", arr}}).dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    csv << config_comment(cfg);
    csv << "# onehot: qubits L(M+1)+1; prep L(M+1)-1 gadgets; map 3L(M+1) local or ceil((M+1)/c) pulses global;"
           " terms 1+LM(M+1)\n";
    csv << "# binary: qubits N_L+N_M+1; prep K N_P 2^N_K (K 2^N_K classical memory); map 2^N_M (M+1);"
           " terms 2^N_M; local gates multiply prep by N_K+1 and map by N_M+1\n";
    csv << "# cost_ratio: binary/one-hot space-time product, blank when L < 2 or M < 2\n";
    csv << "encoding,rows,features,precision_bits,gate_model,qubits,prep_gates,map_gates,measurement_terms,"
           "cost_ratio\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv << to_string(r.encoding) << "," << r.rows << "," << r.features << "," << r.precision_bits << ","
            << to_string(r.gates) << "," << r.qubits << "," << r.prep_gates << "," << r.map_gates << ","
            << r.measurement_terms << "," << (std::isnan(ratios[i]) ? std::string() : num(ratios[i])) << "\n";
    }
    write_text(cfg.out, csv.str());
}

// One pipeline evaluation at fixed weights.
void cmd_measure(const ExperimentConfig& cfg) {
    const DataTable table = prepare(load_raw(cfg), cfg.normalize);
    const std::size_t M = table.features();
    std::vector<double> w = cfg.weights;
    if (w.empty()) w.assign(M, 0.0);
    if (w.size() != M) {
        throw Error(ErrorCode::DimensionMismatch,
                    "table has " + std::to_string(M) + " features, got " + std::to_string(w.size()) + " weights");
    }
    double s = cfg.weight_scale;
    if (!(s > 0)) {
        s = 1.0;
        for (double v : w) s = std::max(s, std::abs(v));
    }
    const PhaseProgram program = PhaseProgram::from_weights(w, s);
    const auto phases = program.circuit_phases();
    RegressionConfig rc = regression_config(cfg);
    if (rc.path == CostPath::analytic) rc.path = CostPath::quantum_exact;

    const double c0 = std::cos(phases[0]);
    const double cost = quantum_cost(table, program, rc);
    const double reg = analytic_cost(table, w, cfg.alpha, cfg.beta) - analytic_cost(table, w);
    const double expectation = (cost - reg) * c0 * c0;

    json r = {{"config", cfg.to_json()},
              {"rows", table.rows()},
              {"features", M},
              {"weight_scale", s},
              {"circuit_phases", phases},
              {"expectation", expectation},
              {"exact_expectation", pipeline_expectation(table, phases, rc.encoder)},
              {"cost", cost},
              {"analytic_cost", analytic_cost(table, w, cfg.alpha, cfg.beta)},
              {"null_success_probability", success_probability_null(table)}};
    if (cfg.format == "json") {
        write_text(cfg.out, r.dump(2) + "\n");
        return;
    }
    std::ostringstream csv;
    csv << config_comment(cfg) << "quantity,value\n";
    for (const char* key : {"expectation", "exact_expectation", "cost", "analytic_cost", "null_success_probability",
                            "weight_scale"}) {
        csv << key << "," << num(r[key].get<double>()) << "\n";
    }
    write_text(cfg.out, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;
    CLI::App app{"Interpretable quantum regression: experiments and reports", "xqr"};
    app.set_config("--config", "", "TOML or INI file; flags override it")->check(CLI::ExistingFile);
    app.require_subcommand(1);
    app.fallthrough();

    const std::string data = "Data", reg = "Regression", ens = "Ensemble", res = "Resources", io = "Output";
    app.add_option("--in", cfg.input, "input CSV (header row, response first)")->group(data);
    app.add_option("--dataset", cfg.dataset, "generated dataset when --in is absent")
        ->check(CLI::IsMember({"linear", "sine"}))
        ->group(data);
    app.add_option("--rows", cfg.rows, "linear dataset rows")->group(data);
    app.add_option("--features", cfg.features, "linear dataset features")->group(data);
    app.add_option("--noise", cfg.noise, "sd of the per-record weight draw")->group(data);
    app.add_option("--sine-rows", cfg.sine_rows, "sine dataset rows")->group(data);
    app.add_option("--degree", cfg.degree, "sine dataset polynomial degree")->group(data);
    app.add_option("--normalize", cfg.normalize, "table preparation before fitting")
        ->check(CLI::IsMember({"global", "standardize", "none"}))
        ->group(data);

    app.add_option("--encoder", cfg.encoder)->check(CLI::IsMember({"onehot", "binary"}))->group(reg);
    app.add_option("--cost", cfg.cost)
        ->check(CLI::IsMember({"analytic", "quantum-exact", "quantum-shots"}))
        ->group(reg);
    auto* alpha_opt = app.add_option("--alpha", cfg.alpha, "L1 strength")->group(reg);
    app.add_option("--beta", cfg.beta, "L2 strength")->group(reg);
    app.add_option("--shots", cfg.shots)->group(reg);
    app.add_option("--readout-error", cfg.readout_error, "per-qubit flip probability")->group(reg);
    app.add_option("--weight-scale", cfg.weight_scale, "quantum path weight scale (0: automatic)")->group(reg);
    app.add_option("--max-restarts", cfg.max_restarts, "Nelder-Mead warm restarts")->group(reg);
    app.add_option("--init", cfg.init, "initial weights")->delimiter(',')->group(reg);
    app.add_option("--weights", cfg.weights, "weights for measure")->delimiter(',')->group(reg);

    app.add_option("--batches", cfg.batches)->group(ens);
    app.add_option("--batch-size", cfg.batch_size)->group(ens);
    app.add_option("--batch-sizes", cfg.batch_sizes, "reproduce-table sizes")->delimiter(',')->group(ens);
    app.add_option("--standardization", cfg.standardization)
        ->check(CLI::IsMember({"per-batch", "master"}))
        ->group(ens);
    app.add_option("--workers", cfg.workers, "worker threads (0: XQR_WORKERS or all cores)")->group(ens);

    app.add_option("--grid-rows", cfg.grid_rows)->delimiter(',')->group(res);
    app.add_option("--grid-features", cfg.grid_features)->delimiter(',')->group(res);
    app.add_option("--encodings", cfg.encodings)->delimiter(',')->group(res);
    app.add_option("--precision-bits", cfg.precision_bits)->group(res);
    app.add_option("--gates", cfg.gates)->check(CLI::IsMember({"global", "local"}))->group(res);
    app.add_option("--memory", cfg.memory)->check(CLI::IsMember({"quantum", "classical"}))->group(res);
    app.add_option("--columns-per-pulse", cfg.columns_per_pulse)->group(res);

    app.add_option("--seed", cfg.seed)->group(io);
    app.add_option("--out", cfg.out, "output path (default stdout)")->group(io);
    app.add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}))->group(io);

    app.add_subcommand("gen-data", "generate a synthetic table (CSV plus .meta.json)");
    app.add_subcommand("train", "fit weights; model JSON or weight CSV plus a summary");
    app.add_subcommand("ensemble", "bootstrap ensemble: mean, SE and t per feature");
    app.add_subcommand("reproduce-table", "weights, SEs or t over batch sizes")
        ->add_option("which", cfg.table, "3..8")
        ->required()
        ->check(CLI::Range(3, 8));
    app.add_subcommand("sine-demo", "L1-regularized polynomial fit of sin x");
    app.add_subcommand("resources", "qubit and gate counts over an (L, M) grid");
    app.add_subcommand("measure", "one pipeline expectation at fixed weights");

    try {
        app.parse(argc, argv);
    } catch (const CLI::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIO;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.format.empty()) cfg.format = cfg.command == "train" ? "json" : "csv";
    if (cfg.command == "sine-demo" && alpha_opt->count() == 0) cfg.alpha = 1.2e-7;

    try {
        require_format(cfg);
        if (cfg.command == "gen-data") cmd_gen_data(cfg);
        else if (cfg.command == "train") cmd_train(cfg);
        else if (cfg.command == "ensemble") cmd_ensemble(cfg);
        else if (cfg.command == "reproduce-table") cmd_reproduce_table(cfg);
        else if (cfg.command == "sine-demo") cmd_sine_demo(cfg);
        else if (cfg.command == "resources") cmd_resources(cfg);
        else cmd_measure(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
