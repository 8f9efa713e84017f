#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/bench.hpp"
#include "causal_atlas/diagnostics.hpp"

namespace causal_atlas {

/// Ordinal: Poor = 0 .. Robust = 4.
enum class Rating { poor = 0, limited = 1, moderate = 2, strong = 3, robust = 4 };
std::string to_string(Rating r);

enum class Condition { linear, nonlinear, dense, sparse, large_p, non_gaussian, heterogeneous, missing_tolerant, discrete_mix };
std::string to_string(Condition c);
const std::vector<Condition>& all_conditions();

inline constexpr Index kLargeP = 50;

/// Conditions a profile switches on.
std::vector<Condition> active_conditions(const DatasetProfile& profile);

struct RatingCell {
    Rating rating = Rating::moderate;
    std::string citation;
};

struct Fingerprint {
    double n_samples = 0;
    double n_vars = 0;
    std::optional<double> density;
    double linear = 0.5;    // 1 linear, 0 nonlinear, 0.5 unknown; averages allowed
    double gaussian = 0.5;  // same encoding for the noise verdict
};
Fingerprint fingerprint(const DatasetProfile& profile);
/// Sum of |log10 ratio| for n and p, |difference| for density, linear and
/// gaussian; density is skipped when either side lacks it.
double fingerprint_distance(const Fingerprint& a, const Fingerprint& b);

struct BenchmarkRow {
    std::string scenario;
    Fingerprint fingerprint;
    double mean_f1 = 0.0;
    double mean_runtime = 0.0;
};

struct AlgorithmEntry {
    std::string id;
    std::string family;
    DataKind data_kind = DataKind::tabular;
    Index max_vars = 100;
    bool requires_continuous = false;
    bool requires_non_gaussian = false;
    std::map<Condition, RatingCell> ratings;
    nlohmann::json default_config = nlohmann::json::object();
    std::vector<BenchmarkRow> benchmark_rows;
};

using Registry = std::vector<AlgorithmEntry>;

/// Ratings distilled from the published benchmarking findings plus
/// benchmark rows measured with this library's own harness.
const Registry& default_registry();
const AlgorithmEntry& find_entry(const Registry& registry, const std::string& id);

struct Exclusion {
    std::string id;
    std::string reason;
};

struct FilterResult {
    std::vector<std::string> candidates;
    std::vector<Exclusion> excluded;
    std::vector<std::string> warnings;
};

/// Reasons `entry` cannot run on `profile`; empty when compatible.
std::vector<std::string> violations(const AlgorithmEntry& entry, const DatasetProfile& profile);
/// nearest-row runtime x (n / n_row) x (p / p_row)^2
std::optional<double> predicted_runtime(const AlgorithmEntry& entry, const DatasetProfile& profile);

FilterResult filter_algorithms(const DatasetProfile& profile, const Registry& registry);

struct RankedCandidate {
    std::string id;
    double theoretical = 0.0;
    double empirical = 0.0;
    double score = 0.0;  // blended, after min-max normalization
};

std::vector<RankedCandidate> rank_algorithms(const std::vector<std::string>& candidates, const DatasetProfile& profile,
                                             const Registry& registry, double theory_weight = 0.5);

struct Configured {
    nlohmann::json config;
    std::vector<std::string> rationale;
};
Configured configure_hyperparameters(const std::string& id, const DatasetProfile& profile);

struct SelectionTrace {
    std::vector<Exclusion> filtered_out;
    std::vector<RankedCandidate> ranked;
    std::string chosen;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> rationale;
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const SelectionTrace& t);
SelectionTrace selection_trace_from_json(const nlohmann::json& j);

SelectionTrace select_algorithm(const DatasetProfile& profile, const Registry& registry = default_registry(),
                                double theory_weight = 0.5);

/// Re-selects `chosen` among the ranked candidates (new config, rationale
/// line); used by the advisor and by fallback after an algorithm error.
SelectionTrace switch_choice(const SelectionTrace& trace, const std::string& id, const DatasetProfile& profile,
                             const std::string& reason);

/// Posts {profile, candidates, trace} to `endpoint` (http://host:port/path)
/// with a 5 s timeout. Any failure or an out-of-set choice leaves the trace
/// unchanged apart from a warning.
SelectionTrace advisor_rerank(const SelectionTrace& trace, const DatasetProfile& profile,
                              const std::optional<std::string>& endpoint, const Registry& registry = default_registry());

/// Runs `suite` and turns every (scenario, algorithm) cell into a registry
/// row, fingerprinted by profiling the simulated data.
std::map<std::string, std::vector<BenchmarkRow>> measure_benchmark_rows(const ScenarioSuite& suite,
                                                                        const std::vector<std::string>& algorithms,
                                                                        std::uint64_t seed_offset);

}  // namespace causal_atlas
