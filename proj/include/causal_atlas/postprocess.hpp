#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/cancel.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/types.hpp"

namespace causal_atlas {

/// frequency(i, j): share of completed replicates with i -> j.
struct EdgeConfidence {
    MatrixXd frequency;
    int b_samples = 0;
    int completed = 0;
    std::vector<std::string> skipped;  // "replicate k: message"
};

nlohmann::json to_json(const EdgeConfidence& c);
EdgeConfidence edge_confidence_from_json(const nlohmann::json& j);

inline constexpr int kDefaultBootstrap = 100;
inline constexpr double kDefaultHi = 0.9;
inline constexpr double kDefaultLo = 0.1;

/// Rows resampled with replacement (moving blocks of length 2 x lag for time
/// series); an undirected CPDAG edge adds 1/2 to each direction. Replicate k
/// draws from stream k of `seed`, so results do not depend on `parallelism`.
EdgeConfidence bootstrap_edge_frequencies(const Dataset& data, const std::string& algorithm, const nlohmann::json& config,
                                          int b_samples, std::uint64_t seed, int parallelism = 1,
                                          const CancelToken& cancel = CancelToken::none());

/// Resampled row order for replicate draws; exposed for tests.
std::vector<Index> bootstrap_rows(Index n_rows, Index block_length, std::uint64_t seed, std::uint64_t replicate);

struct UncertainEdge {
    int from = 0;
    int to = 0;
    double frequency = 0.0;
    bool present = false;
};

struct RefineResult {
    BoolMatrix graph;
    std::vector<UncertainEdge> uncertain;
    std::vector<std::string> log;
};

/// Drops edges at or below `lo`, adds absent edges at or above `hi`, then
/// breaks cycles by deleting the lowest-frequency edge of each cycle found.
/// Time-series summaries pass require_acyclic = false.
RefineResult refine_graph(const BoolMatrix& graph, const EdgeConfidence& conf, double hi = kDefaultHi,
                          double lo = kDefaultLo, bool require_acyclic = true);

/// Endpoints are node labels; a bare integer also matches by index.
struct ConstraintSet {
    std::vector<std::pair<std::string, std::string>> required;
    std::vector<std::pair<std::string, std::string>> forbidden;
    std::vector<std::string> forbidden_as_effect;

    bool empty() const { return required.empty() && forbidden.empty() && forbidden_as_effect.empty(); }
};

nlohmann::json to_json(const ConstraintSet& c);
ConstraintSet constraint_set_from_json(const nlohmann::json& j);
/// Union of several sets, duplicates removed, first-seen order kept.
ConstraintSet merge_constraints(const std::vector<ConstraintSet>& sets);

struct ResolvedConstraints {
    std::vector<std::pair<int, int>> required;
    std::vector<std::pair<int, int>> forbidden;
    std::vector<int> forbidden_as_effect;
};

/// Maps labels to indices and checks consistency (ConflictingConstraints,
/// CycleFromConstraints, InvalidArgument for unknown nodes or self-loops).
ResolvedConstraints resolve_constraints(const ConstraintSet& c, const std::vector<std::string>& labels,
                                        bool require_acyclic = true);

/// Removes forbidden edges and every edge into a forbidden_as_effect node,
/// inserts required edges (dropping their reverses), then breaks any cycle
/// by deleting a non-required edge, the lowest-frequency one when
/// `frequency` is given.
BoolMatrix apply_constraints(const BoolMatrix& graph, const ConstraintSet& c, const std::vector<std::string>& labels,
                             const std::optional<MatrixXd>& frequency = std::nullopt, bool require_acyclic = true);

/// Pins frequencies to what the constraints allow: 1 for required, 0 for
/// forbidden edges and edges into forbidden_as_effect nodes.
EdgeConfidence constrain_confidence(const EdgeConfidence& conf, const ConstraintSet& c,
                                    const std::vector<std::string>& labels);

}  // namespace causal_atlas
