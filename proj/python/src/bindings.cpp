#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "xqr/data_table.hpp"
#include "xqr/ensemble.hpp"
#include "xqr/error.hpp"
#include "xqr/regression.hpp"
#include "xqr/resources.hpp"

namespace py = pybind11;
using namespace xqr;

namespace {

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;

DataTable table_from_array(const Matrix& a, std::optional<std::vector<std::string>> names) {
    if (a.ndim() != 2) throw Error(ErrorCode::InvalidShape, "expected a 2-D array (rows x columns)");
    const auto L = static_cast<std::size_t>(a.shape(0));
    const auto C = static_cast<std::size_t>(a.shape(1));
    std::vector<double> v(a.data(), a.data() + L * C);
    TableMetadata meta;
    if (names) meta.column_names = *names;
    return DataTable(L, C, std::move(v), meta);
}

Matrix table_values(const DataTable& t) {
    Matrix out({t.rows(), t.cols()});
    std::copy(t.values().begin(), t.values().end(), out.mutable_data());
    return out;
}

RegressionConfig make_config(double alpha, double beta, const std::string& cost, const std::string& encoder,
                             std::size_t shots, double readout_error, std::optional<double> weight_scale,
                             std::vector<double> initial_weights, std::size_t max_restarts, std::uint64_t seed) {
    RegressionConfig rc;
    rc.alpha = alpha;
    rc.beta = beta;
    rc.path = cost_path_from_string(cost);
    rc.encoder = encoder_from_string(encoder);
    rc.shots = shots;
    rc.readout_error = readout_error;
    rc.weight_scale = weight_scale;
    rc.initial_weights = std::move(initial_weights);
    rc.optimizer.max_restarts = max_restarts;
    rc.seed = seed;
    return rc;
}

MemoryModel memory_from_string(const std::string& s) {
    if (s == "quantum") return MemoryModel::quantum;
    if (s == "classical") return MemoryModel::classical;
    throw Error(ErrorCode::InvalidArgument, "memory must be quantum or classical");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interpretable quantum regression: simulator-backed training and resource estimates";

    static py::exception<Error> error_type(m, "XqrError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.message());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<DataTable>(m, "DataTable")
        .def(py::init(&table_from_array), py::arg("values"), py::arg("names") = py::none(),
             "Rows x (M+1) table; column 0 is the response.")
        .def_property_readonly("rows", &DataTable::rows)
        .def_property_readonly("cols", &DataTable::cols)
        .def_property_readonly("features", &DataTable::features)
        .def_property_readonly("values", &table_values)
        .def_property_readonly("metadata", [](const DataTable& t) { return to_python(to_json(t)["metadata"]); })
        .def("column_name", &DataTable::column_name)
        .def("to_raw_weights", [](const DataTable& t, const std::vector<double>& w) { return t.to_raw_weights(w); })
        .def("standardize", [](const DataTable& t) { return standardize(t).table; })
        .def("normalize_globally", [](const DataTable& t) { return normalize_globally(t).table; })
        .def("__eq__", [](const DataTable& a, const DataTable& b) { return a == b; })
        .def("__repr__", [](const DataTable& t) {
            return "<DataTable " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ">";
        });

    m.def(
        "generate_linear_synthetic",
        [](std::size_t rows, std::size_t features, double noise, std::uint64_t seed) {
            return generate_linear_synthetic({rows, features, noise, seed});
        },
        py::arg("rows") = 1024, py::arg("features") = 6, py::arg("noise") = 0.0, py::arg("seed") = 0);
    m.def("generate_sine_synthetic", &generate_sine_synthetic, py::arg("rows") = 32, py::arg("degree") = 15,
          py::arg("seed") = 0);
    m.def("bootstrap_sample", &bootstrap_sample, py::arg("table"), py::arg("size"), py::arg("seed"));
    m.def("read_csv", &read_csv_file, py::arg("path"));
    m.def("write_csv", [](const DataTable& t, const std::string& path) { write_csv_file(path, t); }, py::arg("table"),
          py::arg("path"));

    m.def(
        "circuit_phases",
        [](const std::vector<double>& w, double scale) { return PhaseProgram::from_weights(w, scale).circuit_phases(); },
        py::arg("weights"), py::arg("weight_scale") = 1.0, "Programmed angles, response first.");
    m.def(
        "pipeline_expectation",
        [](const DataTable& t, const std::vector<double>& phases, const std::string& encoder) {
            return pipeline_expectation(t, phases, encoder_from_string(encoder));
        },
        py::arg("table"), py::arg("phases"), py::arg("encoder") = "onehot");
    m.def(
        "analytic_cost",
        [](const DataTable& t, const std::vector<double>& w, double alpha, double beta) {
            return analytic_cost(t, w, alpha, beta);
        },
        py::arg("table"), py::arg("weights"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0);
    m.def(
        "analytic_gradient",
        [](const DataTable& t, const std::vector<double>& w, double scale) {
            return analytic_gradient(t, PhaseProgram::from_weights(w, scale));
        },
        py::arg("table"), py::arg("weights"), py::arg("weight_scale") = 1.0,
        "dC/dphi_m for the feature angles that realize the weights.");

    m.def(
        "train",
        [](const DataTable& t, double alpha, double beta, const std::string& cost, const std::string& encoder,
           std::size_t shots, double readout_error, std::optional<double> weight_scale,
           std::vector<double> initial_weights, std::size_t max_restarts, std::uint64_t seed) {
            const auto rc = make_config(alpha, beta, cost, encoder, shots, readout_error, weight_scale,
                                        std::move(initial_weights), max_restarts, seed);
            RegressionModel model;
            {
                py::gil_scoped_release release;
                model = train(t, rc);
            }
            return to_python(model.to_json());
        },
        py::arg("table"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("cost") = "analytic",
        py::arg("encoder") = "onehot", py::arg("shots") = 100000, py::arg("readout_error") = 0.0,
        py::arg("weight_scale") = py::none(), py::arg("initial_weights") = std::vector<double>{},
        py::arg("max_restarts") = 50, py::arg("seed") = 0);

    m.def(
        "train_ensemble",
        [](const DataTable& master, std::size_t batches, std::size_t batch_size, const std::string& standardization,
           std::uint64_t seed, std::size_t workers, double alpha, double beta) {
            EnsembleOptions opt;
            opt.batches = batches;
            opt.batch_size = batch_size;
            if (standardization == "per-batch") {
                opt.standardization = StandardizationMode::per_batch;
            } else if (standardization == "master") {
                opt.standardization = StandardizationMode::master;
            } else {
                throw Error(ErrorCode::InvalidArgument, "standardization must be per-batch or master");
            }
            opt.seed = seed;
            opt.workers = workers;
            RegressionConfig rc;
            rc.alpha = alpha;
            rc.beta = beta;
            EnsembleReport r;
            {
                py::gil_scoped_release release;
                r = train_ensemble(master, rc, opt);
            }
            return to_python(r.to_json());
        },
        py::arg("master"), py::arg("batches") = 1024, py::arg("batch_size") = 150,
        py::arg("standardization") = "per-batch", py::arg("seed") = 0, py::arg("workers") = 0,
        py::arg("alpha") = 0.0, py::arg("beta") = 0.0);

    m.def(
        "success_probability_null",
        [](const DataTable& t, double phi) { return success_probability_null(t, phi); }, py::arg("table"),
        py::arg("response_angle") = 3.141592653589793);
    m.def("goodness", &goodness, py::arg("pr_model"), py::arg("pr_null"));
    m.def("minimal_shots", &minimal_shots, py::arg("pr_null"), py::arg("delta_eps") = 0.0);
    m.def(
        "readout_error_budget",
        [](const std::string& enc, std::size_t rows, std::size_t features, double delta) {
            return readout_error_budget(encoder_from_string(enc), rows, features, delta);
        },
        py::arg("encoding"), py::arg("rows"), py::arg("features"), py::arg("delta"));

    m.def(
        "estimate",
        [](const std::string& enc, std::size_t rows, std::size_t features, std::size_t precision_bits,
           const std::string& gates, const std::string& memory, bool count_memory_qubits,
           std::size_t columns_per_pulse) {
            ResourceOptions opt;
            opt.precision_bits = precision_bits;
            opt.gates = gate_model_from_string(gates);
            opt.memory = memory_from_string(memory);
            opt.count_memory_qubits = count_memory_qubits;
            opt.columns_per_pulse = columns_per_pulse;
            return to_python(estimate(encoder_from_string(enc), rows, features, opt).to_json());
        },
        py::arg("encoding"), py::arg("rows"), py::arg("features"), py::arg("precision_bits") = 12,
        py::arg("gates") = "global", py::arg("memory") = "quantum", py::arg("count_memory_qubits") = false,
        py::arg("columns_per_pulse") = 1);
    m.def("compare_cost_ratio", &compare_cost_ratio, py::arg("rows"), py::arg("features"),
          py::arg("precision_bits") = 12);
}
