#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace xqr {

/// Provenance carried alongside the numbers. `column_means` / `column_scales`
/// describe the affine map back to raw units: raw = mean + scale * value.
struct TableMetadata {
    bool standardized = false;
    bool globally_normalized = false;
    std::optional<double> global_norm;  // R^2 of the last global normalization
    std::vector<double> column_means;
    std::vector<double> column_scales;
    std::vector<std::string> column_names;
    std::vector<std::string> lineage;
};

/// Row-major L x (M+1) table. Column 0 is the response, columns 1..M are features.
/// Immutable once built; every transformation returns a new table.
class DataTable {
public:
    DataTable() = default;
    DataTable(std::size_t rows, std::size_t cols, std::vector<double> values, TableMetadata meta = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t features() const noexcept { return cols_ == 0 ? 0 : cols_ - 1; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double operator()(std::size_t l, std::size_t m) const noexcept { return values_[l * cols_ + m]; }
    std::span<const double> row(std::size_t l) const noexcept { return {values_.data() + l * cols_, cols_}; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double> column(std::size_t m) const;

    const TableMetadata& metadata() const noexcept { return meta_; }
    bool standardized() const noexcept { return meta_.standardized; }
    std::string column_name(std::size_t m) const;

    DataTable with_metadata(TableMetadata meta) const;

    /// Weights fitted in this table's units, re-expressed in raw units.
    std::vector<double> to_raw_weights(std::span<const double> weights) const;

    /// Sum of squares over all entries.
    double total_sum_of_squares() const noexcept;

    friend bool operator==(const DataTable& a, const DataTable& b) noexcept {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    TableMetadata meta_;
};

struct GlobalNorm {
    double r_squared = 0.0;
};

struct NormalizedTable {
    DataTable table;
    GlobalNorm norm;
};

/// Center each column, scale it to unit sum of squares, then divide every
/// entry by sqrt(M+1) so the whole table has unit norm. R^2 = M+1.
NormalizedTable standardize(const DataTable& table);

/// Divide every entry by the table norm without touching column means or
/// relative scales; fitted weights keep their raw-unit meaning.
NormalizedTable normalize_globally(const DataTable& table);

enum class StandardizationMode { per_batch, master };

struct SyntheticSpec {
    std::size_t rows = 1024;
    std::size_t features = 6;
    double noise = 0.0;  // sd of the per-record weight draw
    std::uint64_t seed = 0;
};

/// Features uniform on [-1,1]; response = sum_i X_i W_i with a fresh
/// W_i ~ Normal(i, noise) per record.
DataTable generate_linear_synthetic(const SyntheticSpec& spec);

/// Features x, x^2, ..., x^degree of x ~ U[-1,1]; response sin(x).
DataTable generate_sine_synthetic(std::size_t rows, std::size_t degree, std::uint64_t seed);

std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t size, std::uint64_t seed);

/// Fraction of draws that repeat an earlier draw.
double duplicate_fraction(std::span<const std::size_t> indices);

DataTable select_rows(const DataTable& table, std::span<const std::size_t> indices);

DataTable bootstrap_sample(const DataTable& table, std::size_t size, std::uint64_t seed);

// CSV: header row, first column response, remaining columns features.
DataTable read_csv(std::istream& in);
DataTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const DataTable& table);
void write_csv_file(const std::string& path, const DataTable& table);

nlohmann::json to_json(const DataTable& table);
DataTable table_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double value);

}  // namespace xqr
