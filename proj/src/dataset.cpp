#include "causal_atlas/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "causal_atlas/error.hpp"
#include "causal_atlas/text.hpp"

namespace causal_atlas {

namespace {

void validate(const MatrixXd& values, const std::vector<ColumnMeta>& columns, const std::optional<IntVector>& domain,
              const std::optional<IntVector>& time) {
    if (static_cast<Index>(columns.size()) != values.cols())
        throw Error(ErrorCode::DimensionMismatch, "column metadata count differs from data width");
    if (domain && domain->size() != values.rows())
        throw Error(ErrorCode::DimensionMismatch, "domain index length differs from row count");
    if (time && time->size() != values.rows())
        throw Error(ErrorCode::DimensionMismatch, "time index length differs from row count");
    for (Index j = 0; j < values.cols(); ++j) {
        const auto& meta = columns[static_cast<std::size_t>(j)];
        for (Index i = 0; i < values.rows(); ++i) {
            double v = values(i, j);
            if (std::isnan(v)) continue;
            if (!std::isfinite(v))
                throw Error(ErrorCode::InvalidArgument, "column " + meta.name + " contains a non-finite value");
            if (meta.kind == ColumnKind::discrete && (v != std::floor(v) || v < 0 || v >= meta.cardinality))
                throw Error(ErrorCode::InvalidArgument, "discrete column " + meta.name + " has an invalid label");
        }
    }
}

}  // namespace

Dataset::Dataset(MatrixXd values, std::vector<ColumnMeta> columns, std::optional<IntVector> domain_index,
                 std::optional<IntVector> time_index)
    : values_(std::move(values)),
      columns_(std::move(columns)),
      domain_index_(std::move(domain_index)),
      time_index_(std::move(time_index)) {
    validate(values_, columns_, domain_index_, time_index_);
}

Dataset::Dataset(MatrixXd values) : values_(std::move(values)) {
    for (Index j = 0; j < values_.cols(); ++j) columns_.push_back({"X" + std::to_string(j), ColumnKind::continuous, 0});
    validate(values_, columns_, domain_index_, time_index_);
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

bool Dataset::has_missing() const { return values_.array().isNaN().any(); }

bool Dataset::all_continuous() const {
    for (const auto& c : columns_)
        if (c.kind != ColumnKind::continuous) return false;
    return true;
}

double Dataset::discrete_ratio() const {
    if (columns_.empty()) return 0.0;
    double k = 0;
    for (const auto& c : columns_) k += c.kind == ColumnKind::discrete;
    return k / static_cast<double>(columns_.size());
}

double Dataset::missing_rate() const {
    if (values_.size() == 0) return 0.0;
    return static_cast<double>(values_.array().isNaN().count()) / static_cast<double>(values_.size());
}

Dataset Dataset::with_values(MatrixXd values) const {
    return Dataset(std::move(values), columns_, domain_index_, time_index_);
}

Dataset Dataset::with_columns(std::vector<ColumnMeta> columns) const {
    return Dataset(values_, std::move(columns), domain_index_, time_index_);
}

Dataset Dataset::with_values_and_columns(MatrixXd values, std::vector<ColumnMeta> columns) const {
    return Dataset(std::move(values), std::move(columns), domain_index_, time_index_);
}

Dataset Dataset::with_domain_index(std::optional<IntVector> domain_index) const {
    return Dataset(values_, columns_, std::move(domain_index), time_index_);
}

Dataset Dataset::select_rows(const std::vector<Index>& rows) const {
    const Index m = static_cast<Index>(rows.size());
    MatrixXd v(m, values_.cols());
    std::optional<IntVector> dom, time;
    if (domain_index_) dom = IntVector(m);
    if (time_index_) time = IntVector(m);
    for (Index r = 0; r < m; ++r) {
        v.row(r) = values_.row(rows[static_cast<std::size_t>(r)]);
        if (dom) (*dom)(r) = (*domain_index_)(rows[static_cast<std::size_t>(r)]);
        if (time) (*time)(r) = static_cast<int>(r);
    }
    return Dataset(std::move(v), columns_, std::move(dom), std::move(time));
}

Dataset Dataset::select_columns(const std::vector<Index>& cols) const {
    MatrixXd v(values_.rows(), static_cast<Index>(cols.size()));
    std::vector<ColumnMeta> meta;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        v.col(static_cast<Index>(k)) = values_.col(cols[k]);
        meta.push_back(columns_.at(static_cast<std::size_t>(cols[k])));
    }
    return Dataset(std::move(v), std::move(meta), domain_index_, time_index_);
}

bool operator==(const Dataset& a, const Dataset& b) {
    if (a.columns_ != b.columns_ || a.values_.rows() != b.values_.rows()) return false;
    // NaN-aware bitwise comparison
    for (Index i = 0; i < a.values_.size(); ++i) {
        double x = a.values_.data()[i], y = b.values_.data()[i];
        if (std::isnan(x) != std::isnan(y)) return false;
        if (!std::isnan(x) && x != y) return false;
    }
    return a.domain_index_ == b.domain_index_ && a.time_index_ == b.time_index_;
}

// ---- files --------------------------------------------------------------

std::string write_csv(const Dataset& data) {
    std::ostringstream out;
    std::vector<std::string> header;
    if (data.is_time_series()) header.emplace_back(kTimeColumn);
    for (const auto& c : data.columns()) header.push_back(c.name);
    if (data.domain_index()) header.emplace_back(kDomainColumn);
    out << join(header, ",") << '\n';
    std::string line;
    for (Index i = 0; i < data.n_samples(); ++i) {
        line.clear();
        bool first = true;
        auto sep = [&] {
            if (!first) line += ',';
            first = false;
        };
        if (data.is_time_series()) {
            sep();
            line += std::to_string((*data.time_index())(i));
        }
        for (Index j = 0; j < data.n_columns(); ++j) {
            sep();
            double v = data.values()(i, j);
            if (std::isnan(v)) continue;
            if (data.column(j).kind == ColumnKind::discrete)
                line += std::to_string(static_cast<long long>(v));
            else
                line += format_double(v);
        }
        if (data.domain_index()) {
            sep();
            line += std::to_string((*data.domain_index())(i));
        }
        out << line << '\n';
    }
    return out.str();
}

Dataset read_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedCsv, "empty file");
    std::vector<std::string> header;
    for (auto& h : split(line, ',')) header.push_back(trim(h));
    if (header.empty() || (header.size() == 1 && header[0].empty()))
        throw Error(ErrorCode::MalformedCsv, "header row is empty");
    const bool has_time = header.front() == kTimeColumn;
    int domain_col = -1;
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == kDomainColumn) domain_col = static_cast<int>(k);

    std::vector<std::vector<double>> rows;
    std::vector<int> times, domains;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row_no) + " has " +
                                                     std::to_string(cells.size()) + " cells, expected " +
                                                     std::to_string(header.size()));
        std::vector<double> row;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            std::string cell = trim(cells[k]);
            double v = std::nan("");
            bool missing = cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
            if (!missing && !parse_double(cell, v))
                throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row_no) + " column " +
                                                         std::to_string(k + 1) + ": cannot parse '" + cell + "'");
            if ((has_time && k == 0) || static_cast<int>(k) == domain_col) {
                if (missing || v != std::floor(v))
                    throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row_no) + " column " +
                                                             std::to_string(k + 1) + ": index must be an integer");
                (has_time && k == 0 ? times : domains).push_back(static_cast<int>(v));
                continue;
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    std::vector<ColumnMeta> columns;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if ((has_time && k == 0) || static_cast<int>(k) == domain_col) continue;
        columns.push_back({header[k], ColumnKind::continuous, 0});
    }
    MatrixXd values(static_cast<Index>(rows.size()), static_cast<Index>(columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < columns.size(); ++j) values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    std::optional<IntVector> time, dom;
    if (has_time) time = Eigen::Map<IntVector>(times.data(), static_cast<Index>(times.size()));
    if (domain_col >= 0) dom = Eigen::Map<IntVector>(domains.data(), static_cast<Index>(domains.size()));
    return Dataset(std::move(values), std::move(columns), std::move(dom), std::move(time));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
}

Dataset read_csv_file(const std::string& path) { return read_csv(read_text_file(path)); }

nlohmann::json columns_to_json(const Dataset& data) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : data.columns()) {
        nlohmann::json j = {{"name", c.name}, {"kind", c.kind == ColumnKind::discrete ? "discrete" : "continuous"}};
        if (c.kind == ColumnKind::discrete) j["cardinality"] = c.cardinality;
        cols.push_back(std::move(j));
    }
    return cols;
}

Dataset apply_column_json(const Dataset& data, const nlohmann::json& columns) {
    std::vector<ColumnMeta> meta = data.columns();
    for (const auto& c : columns) {
        auto name = c.at("name").get<std::string>();
        for (auto& m : meta) {
            if (m.name != name) continue;
            if (c.value("kind", "continuous") == "discrete") {
                m.kind = ColumnKind::discrete;
                m.cardinality = c.at("cardinality").get<int>();
            } else {
                m.kind = ColumnKind::continuous;
                m.cardinality = 0;
            }
        }
    }
    return data.with_columns(std::move(meta));
}

}  // namespace causal_atlas
