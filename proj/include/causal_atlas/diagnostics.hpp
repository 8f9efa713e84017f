#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/dataset.hpp"
#include "causal_atlas/types.hpp"

namespace causal_atlas {

enum class DataKind { tabular, time_series };
enum class Linearity { linear, nonlinear, unknown };
enum class NoiseVerdict { gaussian, non_gaussian, unknown };
enum class ImputeStrategy { mean_mode, drop_rows };

std::string to_string(DataKind v);
std::string to_string(Linearity v);
std::string to_string(NoiseVerdict v);
std::string to_string(ImputeStrategy v);
DataKind parse_data_kind(const std::string& s);
Linearity parse_linearity(const std::string& s);
NoiseVerdict parse_noise_verdict(const std::string& s);
ImputeStrategy parse_impute_strategy(const std::string& s);

inline constexpr int kMaxDiscreteLevels = 10;

struct SchemaResult {
    Dataset data;
    /// Original values of each discrete column's codes 0..k-1; empty for continuous.
    std::vector<std::vector<double>> levels;
};

/// Discrete iff every non-missing value is an integer and there are at most 10 levels.
SchemaResult infer_schema(const Dataset& data);

Dataset impute(const Dataset& data, ImputeStrategy strategy = ImputeStrategy::mean_mode);

struct DropConstantResult {
    Dataset data;
    std::vector<std::string> removed;
};
DropConstantResult drop_constant(const Dataset& data);

struct LinearityResult {
    Linearity verdict = Linearity::unknown;
    double median_gain = 0.0;
    int pairs_tested = 0;
};
/// Degree-3 vs degree-1 R^2 gain on up to 20 most-correlated continuous pairs
/// (both directions, the larger gain kept). Rows beyond 5000 are subsampled.
LinearityResult test_linearity(const Dataset& data, std::uint64_t seed = 0);

struct GaussianityResult {
    NoiseVerdict verdict = NoiseVerdict::unknown;
    int rejected = 0;
    int tested = 0;
};
/// Jarque-Bera on residuals of linear fits over the same pairs as the linearity check.
GaussianityResult test_gaussian_noise(const Dataset& data);

struct AdfResult {
    double t_stat = 0.0;
    int lags = 0;
    bool stationary = true;
    bool degenerate = false;  // constant series
};
inline constexpr double kAdfCritical = -2.86;
int adf_lag_count(Index n_steps);
AdfResult adf_test(const VectorXd& series);
std::vector<AdfResult> test_stationarity(const Dataset& series);

/// VAR order minimizing ln det(Sigma) + (ln T_eff / T_eff) * L * p^2, all
/// candidates fitted on the rows after max_lag.
int estimate_lag(const Dataset& series, int max_lag);

struct HeterogeneityResult {
    std::optional<bool> heterogeneous;  // unset when no domain index or a single domain
    double min_p_value = 1.0;
};
/// Per-column residuals of a pooled regression on the other continuous
/// columns, compared across domains by a Brown-Forsythe scale test and a
/// one-way location test; Bonferroni across columns at 0.05.
HeterogeneityResult test_heterogeneity(const Dataset& data);

/// Share of continuous pairs whose full-order partial correlation is
/// significant at 0.01; a proxy for moral-graph density.
std::optional<double> estimate_density(const Dataset& data);

struct ProfileHints {
    std::optional<DataKind> data_kind;
    std::optional<Linearity> linearity;
    std::optional<NoiseVerdict> gaussian_noise;
    std::optional<bool> heterogeneous;
    std::optional<bool> dense;
    std::optional<int> max_lag;
    std::optional<double> runtime_budget_seconds;
};

struct DatasetProfile {
    Index n_samples = 0;
    Index n_vars = 0;
    DataKind data_kind = DataKind::tabular;
    double discrete_ratio = 0.0;
    double missing_rate = 0.0;
    Linearity linearity = Linearity::unknown;
    NoiseVerdict gaussian_noise = NoiseVerdict::unknown;
    std::optional<bool> heterogeneous;
    std::optional<bool> stationary;
    std::optional<int> suggested_lag;
    std::optional<double> density;
    std::optional<bool> dense;
    double runtime_budget_seconds = 300.0;
    std::vector<std::string> notes;
};

inline constexpr double kDenseThreshold = 0.45;
inline constexpr int kDefaultMaxLag = 5;

/// Runs every applicable test; hints override test verdicts.
DatasetProfile profile_dataset(const Dataset& data, const ProfileHints& hints = {}, std::uint64_t seed = 0);

nlohmann::json to_json(const DatasetProfile& p);
DatasetProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProfileHints& h);
ProfileHints hints_from_json(const nlohmann::json& j);

}  // namespace causal_atlas
