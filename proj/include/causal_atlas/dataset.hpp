#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/types.hpp"

namespace causal_atlas {

enum class ColumnKind { continuous, discrete };

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    int cardinality = 0;  // discrete only: labels are 0..cardinality-1

    friend bool operator==(const ColumnMeta&, const ColumnMeta&) = default;
};

/// Sample matrix (rows = samples) with per-column metadata. Missing cells are
/// NaN. Optional integer domain index per row, optional time index per row.
class Dataset {
public:
    Dataset() = default;
    Dataset(MatrixXd values, std::vector<ColumnMeta> columns, std::optional<IntVector> domain_index = std::nullopt,
            std::optional<IntVector> time_index = std::nullopt);
    /// All-continuous dataset with default column names X0..X{p-1}.
    explicit Dataset(MatrixXd values);

    Index n_samples() const { return values_.rows(); }
    Index n_columns() const { return values_.cols(); }
    const MatrixXd& values() const { return values_; }
    const std::vector<ColumnMeta>& columns() const { return columns_; }
    const ColumnMeta& column(Index j) const { return columns_.at(static_cast<std::size_t>(j)); }
    const std::optional<IntVector>& domain_index() const { return domain_index_; }
    const std::optional<IntVector>& time_index() const { return time_index_; }
    bool is_time_series() const { return time_index_.has_value(); }

    std::vector<std::string> names() const;
    bool has_missing() const;
    bool all_continuous() const;
    double discrete_ratio() const;
    double missing_rate() const;

    Dataset with_values(MatrixXd values) const;
    Dataset with_columns(std::vector<ColumnMeta> columns) const;
    Dataset with_values_and_columns(MatrixXd values, std::vector<ColumnMeta> columns) const;
    Dataset with_domain_index(std::optional<IntVector> domain_index) const;
    Dataset select_rows(const std::vector<Index>& rows) const;
    Dataset select_columns(const std::vector<Index>& cols) const;

    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    MatrixXd values_;
    std::vector<ColumnMeta> columns_;
    std::optional<IntVector> domain_index_;
    std::optional<IntVector> time_index_;
};

// ---- files --------------------------------------------------------------

inline constexpr const char* kTimeColumn = "time";
inline constexpr const char* kDomainColumn = "domain_index";

/// CSV with a header row; missing cells empty; discrete columns as integers.
/// A time-series dataset leads with an integer `time` column; a domain index
/// is written as a trailing `domain_index` column.
std::string write_csv(const Dataset& data);
/// Parses CSV text. A leading `time` column marks a time series and a
/// `domain_index` column is lifted out of the data. All other columns are
/// continuous until typed by diagnostics or a metadata sidecar.
Dataset read_csv(const std::string& text);

Dataset read_csv_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

nlohmann::json columns_to_json(const Dataset& data);
/// Applies column kinds from a sidecar produced by `columns_to_json`.
Dataset apply_column_json(const Dataset& data, const nlohmann::json& columns);

}  // namespace causal_atlas
