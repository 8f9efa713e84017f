#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/simulate.hpp"

namespace causal_atlas {

using ScenarioConfig = std::variant<TabularScenario, TsScenario>;

struct BenchScenario {
    std::string id;
    ScenarioConfig config;
};

struct ScenarioSuite {
    std::string name;
    std::vector<BenchScenario> scenarios;
    int seeds = 10;
    double timeout_seconds = 120.0;
};

nlohmann::json to_json(const ScenarioSuite& suite);
ScenarioSuite suite_from_json(const nlohmann::json& j);

/// Desk-scale versions of the benchmarking axes, keyed by suite name.
std::map<std::string, ScenarioSuite> default_suites();

/// Simulated data plus the reference graph it is scored against (the DAG for
/// tabular scenarios, the summary graph for time series).
struct BenchInstance {
    Dataset data;
    BoolMatrix truth;
};
BenchInstance make_instance(const ScenarioConfig& config, std::uint64_t seed);

enum class RunStatus { ok, timeout, error };
std::string to_string(RunStatus s);
RunStatus parse_run_status(const std::string& s);

struct RunRecord {
    std::string scenario;
    std::string algorithm;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::optional<EdgeMetrics> metrics;
    double runtime_seconds = 0.0;
    RunStatus status = RunStatus::ok;
    std::string message;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);
/// One record per line.
std::string to_jsonl(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_jsonl(const std::string& text);

using AlgorithmRunner =
    std::function<AlgorithmOutput(const std::string&, const Dataset&, const nlohmann::json&, const CancelToken&)>;

struct BenchOptions {
    std::optional<double> timeout_seconds;  // overrides the suite's cap
    int parallelism = 1;
    std::map<std::string, nlohmann::json> configs;  // per algorithm id
    /// Seconds to wait after cancelling before abandoning a non-cooperative run.
    double grace_seconds = 1.0;
    AlgorithmRunner runner;  // run_algorithm when empty
    std::uint64_t seed_offset = 0;  // seeds run seed_offset .. seed_offset + seeds - 1
};

/// Every (scenario, algorithm, seed) triple yields exactly one record, in
/// scenario-major, then seed, then algorithm order.
std::vector<RunRecord> run_benchmark(const ScenarioSuite& suite, const std::vector<std::string>& algorithms,
                                     const BenchOptions& options = {});

struct AggregateRow {
    std::string scenario;
    std::string algorithm;
    int runs = 0;
    int completed = 0;
    std::optional<double> mean_f1;  // unset when no run completed
    double std_f1 = 0.0;            // sample std; 0 for a single run
    std::optional<double> mean_shd;
    std::optional<double> mean_precision;
    std::optional<double> mean_recall;
    double mean_runtime = 0.0;
    double completion_rate = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

enum class ReportFormat { markdown, json, csv };
ReportFormat parse_report_format(const std::string& s);
std::string to_string(ReportFormat f);

inline constexpr const char* kNotAvailable = "N/A";

struct ReportMeta {
    std::string title = "Benchmark report";
    std::string timestamp = "1970-01-01T00:00:00Z";
    std::string version;
    std::vector<std::pair<std::string, std::string>> extra;
};

std::string emit_report(const std::vector<AggregateRow>& rows, ReportFormat format, const ReportMeta& meta = {});
/// Parses the JSON form back into rows.
std::vector<AggregateRow> aggregates_from_json(const nlohmann::json& j);
std::vector<AggregateRow> aggregates_from_csv(const std::string& text);

}  // namespace causal_atlas
