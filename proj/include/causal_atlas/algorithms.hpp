#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/cancel.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/graph.hpp"

namespace causal_atlas {

enum class OutputKind { dag, cpdag, summary, temporal };
std::string to_string(OutputKind k);

struct AlgorithmInfo {
    std::string id;
    DataKind data_kind;
    OutputKind output;
};

/// Every implemented algorithm, sorted by id.
const std::vector<AlgorithmInfo>& algorithm_catalog();
const AlgorithmInfo& algorithm_info(const std::string& id);

/// Uniform result of any discovery algorithm. `directed` and `undirected`
/// follow the Cpdag convention; time-series methods fill `temporal` and put
/// their summary graph in `directed`.
struct AlgorithmOutput {
    std::string algorithm;
    OutputKind kind = OutputKind::dag;
    BoolMatrix directed;
    BoolMatrix undirected;
    std::optional<MatrixXd> weights;
    std::optional<TemporalGraph> temporal;
    std::vector<std::string> labels;
    std::vector<std::string> warnings;

    int n_nodes() const { return static_cast<int>(directed.rows()); }
};

/// Runs `id` with a parameter map (missing keys take defaults). Throws
/// UnknownAlgorithm for ids outside the catalog and InvalidArgument for
/// unknown or ill-typed parameters.
AlgorithmOutput run_algorithm(const std::string& id, const Dataset& data, const nlohmann::json& config = {},
                              const CancelToken& cancel = CancelToken::none());

/// Directed adjacency to score against a reference DAG or summary graph:
/// CPDAGs through their best-matching extension, temporal graphs as their
/// summary.
BoolMatrix evaluation_matrix(const AlgorithmOutput& out, const BoolMatrix& truth);

/// One DAG member for downstream editing: CPDAGs via a seeded extension
/// (falling back to the best-matching one for non-completed outputs).
BoolMatrix representative_graph(const AlgorithmOutput& out, std::uint64_t seed);

nlohmann::json to_json(const AlgorithmOutput& out);

}  // namespace causal_atlas
