#include "xqr/data_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "xqr/error.hpp"
#include "xqr/rng.hpp"

namespace xqr {

DataTable::DataTable(std::size_t rows, std::size_t cols, std::vector<double> values, TableMetadata meta)
    : rows_(rows), cols_(cols), values_(std::move(values)), meta_(std::move(meta)) {
    if (values_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "table of " + std::to_string(rows_) + "x" + std::to_string(cols_) + " given " +
                        std::to_string(values_.size()) + " values");
    }
    if (!meta_.column_means.empty() && meta_.column_means.size() != cols_) {
        throw Error(ErrorCode::DimensionMismatch, "column_means size does not match column count");
    }
    if (!meta_.column_scales.empty() && meta_.column_scales.size() != cols_) {
        throw Error(ErrorCode::DimensionMismatch, "column_scales size does not match column count");
    }
}

std::vector<double> DataTable::column(std::size_t m) const {
    std::vector<double> out(rows_);
    for (std::size_t l = 0; l < rows_; ++l) out[l] = (*this)(l, m);
    return out;
}

std::string DataTable::column_name(std::size_t m) const {
    if (m < meta_.column_names.size()) return meta_.column_names[m];
    return m == 0 ? "y" : "x" + std::to_string(m);
}

DataTable DataTable::with_metadata(TableMetadata meta) const {
    return DataTable(rows_, cols_, values_, std::move(meta));
}

std::vector<double> DataTable::to_raw_weights(std::span<const double> weights) const {
    if (weights.size() != features()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(features()) + " weights");
    }
    std::vector<double> raw(weights.begin(), weights.end());
    if (meta_.column_scales.empty()) return raw;
    const double response_scale = meta_.column_scales[0];
    for (std::size_t m = 0; m < raw.size(); ++m) raw[m] *= response_scale / meta_.column_scales[m + 1];
    return raw;
}

double DataTable::total_sum_of_squares() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
}

namespace {

// Composes a new affine map (x_old = mean + scale * x_new) onto the table's
// existing raw-unit map.
TableMetadata compose_scaling(const TableMetadata& in, const std::vector<double>& mean,
                              const std::vector<double>& scale) {
    TableMetadata out = in;
    const std::size_t cols = mean.size();
    out.column_means.assign(cols, 0.0);
    out.column_scales.assign(cols, 1.0);
    for (std::size_t m = 0; m < cols; ++m) {
        const double in_mean = in.column_means.empty() ? 0.0 : in.column_means[m];
        const double in_scale = in.column_scales.empty() ? 1.0 : in.column_scales[m];
        out.column_means[m] = in_mean + in_scale * mean[m];
        out.column_scales[m] = in_scale * scale[m];
    }
    return out;
}

}  // namespace

NormalizedTable standardize(const DataTable& table) {
    const std::size_t L = table.rows();
    const std::size_t C = table.cols();
    if (L < 2) throw Error(ErrorCode::DegenerateTable, "standardization needs at least two rows");
    if (C == 0) throw Error(ErrorCode::DegenerateTable, "table has no columns");

    std::vector<double> mean(C, 0.0);
    std::vector<double> scale(C, 0.0);
    for (std::size_t m = 0; m < C; ++m) {
        double s = 0.0;
        for (std::size_t l = 0; l < L; ++l) s += table(l, m);
        mean[m] = s / static_cast<double>(L);
        double ss = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            const double d = table(l, m) - mean[m];
            ss += d * d;
        }
        // Relative test so tables already scaled down (e.g. normalized) still pass.
        double mag = 0.0;
        for (std::size_t l = 0; l < L; ++l) mag = std::max(mag, std::abs(table(l, m)));
        if (ss == 0.0 || std::sqrt(ss) <= 1e-14 * std::max(mag, 1e-300) * std::sqrt(static_cast<double>(L))) {
            throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(m) + " has zero variance");
        }
        scale[m] = std::sqrt(ss);
    }

    const double r2 = static_cast<double>(C);
    const double global = std::sqrt(r2);
    std::vector<double> values(L * C);
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t m = 0; m < C; ++m) {
            values[l * C + m] = (table(l, m) - mean[m]) / scale[m] / global;
        }
    }
    for (double& s : scale) s *= global;

    TableMetadata meta = compose_scaling(table.metadata(), mean, scale);
    meta.standardized = true;
    meta.globally_normalized = true;
    meta.global_norm = r2;
    meta.lineage.push_back("standardize");
    return {DataTable(L, C, std::move(values), std::move(meta)), GlobalNorm{r2}};
}

NormalizedTable normalize_globally(const DataTable& table) {
    if (table.empty()) throw Error(ErrorCode::EmptyTable, "cannot normalize an empty table");
    const double r2 = table.total_sum_of_squares();
    if (r2 == 0.0) throw Error(ErrorCode::ZeroNorm, "table is identically zero");
    const double inv = 1.0 / std::sqrt(r2);
    std::vector<double> values(table.values().begin(), table.values().end());
    for (double& v : values) v *= inv;

    const std::size_t C = table.cols();
    TableMetadata meta =
        compose_scaling(table.metadata(), std::vector<double>(C, 0.0), std::vector<double>(C, std::sqrt(r2)));
    meta.globally_normalized = true;
    meta.global_norm = r2;
    meta.lineage.push_back("normalize_globally");
    return {DataTable(table.rows(), C, std::move(values), std::move(meta)), GlobalNorm{r2}};
}

DataTable generate_linear_synthetic(const SyntheticSpec& spec) {
    if (spec.rows < 1 || spec.features < 1) {
        throw Error(ErrorCode::InvalidArgument, "linear synthetic data needs rows >= 1 and features >= 1");
    }
    if (!(spec.noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be non-negative");

    const std::size_t M = spec.features;
    const std::size_t C = M + 1;
    Rng rng = make_rng(spec.seed, 0x11);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> values(spec.rows * C);
    std::vector<double> x(M);
    for (std::size_t l = 0; l < spec.rows; ++l) {
        for (auto& xi : x) xi = uniform(rng);
        double y = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            double w = static_cast<double>(i + 1);
            if (spec.noise > 0.0) w += spec.noise * normal(rng);
            y += x[i] * w;
        }
        values[l * C] = y;
        for (std::size_t i = 0; i < M; ++i) values[l * C + i + 1] = x[i];
    }

    TableMetadata meta;
    std::ostringstream tag;
    tag << "linear_synthetic(rows=" << spec.rows << ",features=" << M << ",noise=" << format_double(spec.noise)
        << ",seed=" << spec.seed << ")";
    meta.lineage.push_back(tag.str());
    return DataTable(spec.rows, C, std::move(values), std::move(meta));
}

DataTable generate_sine_synthetic(std::size_t rows, std::size_t degree, std::uint64_t seed) {
    if (rows < 1 || degree < 1) throw Error(ErrorCode::InvalidArgument, "sine data needs rows >= 1 and degree >= 1");
    const std::size_t C = degree + 1;
    Rng rng = make_rng(seed, 0x22);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    std::vector<double> values(rows * C);
    for (std::size_t l = 0; l < rows; ++l) {
        const double x = uniform(rng);
        values[l * C] = std::sin(x);
        double p = 1.0;
        for (std::size_t n = 1; n <= degree; ++n) {
            p *= x;
            values[l * C + n] = p;
        }
    }
    TableMetadata meta;
    meta.lineage.push_back("sine_synthetic(rows=" + std::to_string(rows) + ",degree=" + std::to_string(degree) +
                           ",seed=" + std::to_string(seed) + ")");
    return DataTable(rows, C, std::move(values), std::move(meta));
}

std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t size, std::uint64_t seed) {
    if (population == 0) throw Error(ErrorCode::EmptyTable, "cannot resample an empty table");
    if (size < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap size must be at least 1");
    Rng rng = make_rng(seed, 0x33);
    std::uniform_int_distribution<std::size_t> pick(0, population - 1);
    std::vector<std::size_t> idx(size);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

double duplicate_fraction(std::span<const std::size_t> indices) {
    if (indices.empty()) return 0.0;
    std::unordered_set<std::size_t> seen(indices.begin(), indices.end());
    return static_cast<double>(indices.size() - seen.size()) / static_cast<double>(indices.size());
}

DataTable select_rows(const DataTable& table, std::span<const std::size_t> indices) {
    const std::size_t C = table.cols();
    std::vector<double> values;
    values.reserve(indices.size() * C);
    for (std::size_t i : indices) {
        if (i >= table.rows()) throw Error(ErrorCode::IndexOutOfRange, "row index " + std::to_string(i));
        auto r = table.row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    TableMetadata meta = table.metadata();
    meta.standardized = false;
    meta.globally_normalized = false;
    meta.global_norm.reset();
    return DataTable(indices.size(), C, std::move(values), std::move(meta));
}

DataTable bootstrap_sample(const DataTable& table, std::size_t size, std::uint64_t seed) {
    if (table.empty()) throw Error(ErrorCode::EmptyTable, "cannot resample an empty table");
    const auto idx = bootstrap_indices(table.rows(), size, seed);
    DataTable out = select_rows(table, idx);
    TableMetadata meta = out.metadata();
    meta.lineage.push_back("bootstrap(size=" + std::to_string(size) + ",seed=" + std::to_string(seed) + ")");
    return out.with_metadata(std::move(meta));
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

DataTable read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw Error(ErrorCode::ParseError, "missing header row");
    for (auto f : split_fields(line)) names.emplace_back(trim(f));
    const std::size_t C = names.size();

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != C) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(C) + " fields, found " +
                                                   std::to_string(fields.size()));
        }
        for (auto f : fields) {
            f = trim(f);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": cannot parse '" + std::string(f) + "'");
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCode::EmptyTable, "CSV has a header but no data rows");
    TableMetadata meta;
    meta.column_names = std::move(names);
    return DataTable(rows, C, std::move(values), std::move(meta));
}

DataTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
    DataTable t = read_csv(in);
    TableMetadata meta = t.metadata();
    meta.lineage.push_back("csv(" + path + ")");
    return t.with_metadata(std::move(meta));
}

void write_csv(std::ostream& out, const DataTable& table) {
    for (std::size_t m = 0; m < table.cols(); ++m) out << (m ? "," : "") << table.column_name(m);
    out << '\n';
    for (std::size_t l = 0; l < table.rows(); ++l) {
        for (std::size_t m = 0; m < table.cols(); ++m) out << (m ? "," : "") << format_double(table(l, m));
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const DataTable& table) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + path);
    write_csv(out, table);
    if (!out) throw Error(ErrorCode::IOFailure, "write failed for " + path);
}

nlohmann::json to_json(const DataTable& table) {
    const auto& m = table.metadata();
    nlohmann::json j;
    j["rows"] = table.rows();
    j["cols"] = table.cols();
    j["values"] = std::vector<double>(table.values().begin(), table.values().end());
    j["standardized"] = m.standardized;
    j["globally_normalized"] = m.globally_normalized;
    j["global_norm"] = m.global_norm ? nlohmann::json(*m.global_norm) : nlohmann::json(nullptr);
    j["column_means"] = m.column_means;
    j["column_scales"] = m.column_scales;
    j["column_names"] = m.column_names;
    j["lineage"] = m.lineage;
    return j;
}

DataTable table_from_json(const nlohmann::json& j) {
    try {
        TableMetadata meta;
        meta.standardized = j.value("standardized", false);
        meta.globally_normalized = j.value("globally_normalized", false);
        if (j.contains("global_norm") && !j["global_norm"].is_null()) meta.global_norm = j["global_norm"].get<double>();
        meta.column_means = j.value("column_means", std::vector<double>{});
        meta.column_scales = j.value("column_scales", std::vector<double>{});
        meta.column_names = j.value("column_names", std::vector<std::string>{});
        meta.lineage = j.value("lineage", std::vector<std::string>{});
        return DataTable(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                         j.at("values").get<std::vector<double>>(), std::move(meta));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("table JSON: ") + e.what());
    }
}

}  // namespace xqr
