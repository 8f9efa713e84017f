#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/bench.hpp"
#include "causal_atlas/cancel.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/postprocess.hpp"
#include "causal_atlas/selector.hpp"

namespace causal_atlas {

enum class Phase { pending, profiling, selecting, discovering, bootstrapping, awaiting_review, done, failed };
std::string to_string(Phase p);
Phase parse_phase(const std::string& s);

struct PipelineResult;

struct PipelineOptions {
    std::uint64_t seed = 0;
    ProfileHints hints;
    /// Skips selection when set; `config` then overrides the defaults.
    std::optional<std::string> algorithm;
    nlohmann::json config = nlohmann::json::object();
    int bootstrap = kDefaultBootstrap;
    double hi = kDefaultHi;
    double lo = kDefaultLo;
    int parallelism = 1;
    std::optional<std::string> advisor_endpoint;
    std::vector<ConstraintSet> constraints;
    /// Reference graph (cause x effect) for the metrics section.
    std::optional<BoolMatrix> truth;
    std::string timestamp = "1970-01-01T00:00:00Z";
    /// Called on entering each phase with the artifacts completed so far.
    std::function<void(Phase, const PipelineResult&)> on_phase;
};

struct PipelineResult {
    std::uint64_t seed = 0;
    std::vector<std::string> labels;
    std::vector<std::string> dropped_columns;
    DatasetProfile profile;
    SelectionTrace trace;
    AlgorithmOutput output;
    /// Graph before refinement: a DAG member for tabular outputs, the
    /// summary graph for time series.
    BoolMatrix discovered;
    EdgeConfidence confidence;
    RefineResult refined;
    ConstraintSet constraints;
    std::optional<EdgeMetrics> metrics;
    std::vector<std::string> warnings;
    std::string timestamp;
    int bootstrap = 0;
    double hi = kDefaultHi;
    double lo = kDefaultLo;

    const BoolMatrix& graph() const { return refined.graph; }
};

/// Types integer columns with few levels as discrete (tabular data only),
/// imputes missing cells (mean/mode) and drops constant columns.
Dataset prepare_dataset(const Dataset& data, std::vector<std::string>& dropped, std::vector<std::string>& notes);

/// Profile, select (with optional advisor), discover with fallback down the
/// ranking, bootstrap, apply constraints, refine.
PipelineResult run_pipeline(const Dataset& data, const PipelineOptions& options = {},
                            const CancelToken& cancel = CancelToken::none());

/// Re-runs discovery and bootstrap for an earlier result under a new
/// constraint history, reusing its profile and selection.
PipelineResult rerun_with_constraints(const Dataset& data, const PipelineResult& previous,
                                      const std::vector<ConstraintSet>& history, const PipelineOptions& options = {},
                                      const CancelToken& cancel = CancelToken::none());

nlohmann::json graph_json(const PipelineResult& r);
std::string emit_pipeline_report(const PipelineResult& r, ReportFormat format);

}  // namespace causal_atlas
