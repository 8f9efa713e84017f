#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/types.hpp"

namespace causal_atlas {

std::vector<std::string> default_labels(int n_nodes);

/// Directed graph over labelled nodes, row = cause, column = effect.
/// Cycles are permitted (time-series summary graphs); self-loops are not.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(BoolMatrix edges, std::vector<std::string> labels = {});
    Digraph(BoolMatrix edges, MatrixXd weights, std::vector<std::string> labels = {});

    int n_nodes() const { return static_cast<int>(edges_.rows()); }
    const BoolMatrix& edges() const { return edges_; }
    bool has_edge(int from, int to) const { return edges_(from, to); }
    bool adjacent(int a, int b) const { return edges_(a, b) || edges_(b, a); }
    const std::optional<MatrixXd>& weights() const { return weights_; }
    const std::vector<std::string>& labels() const { return labels_; }
    int edge_count() const { return static_cast<int>(edges_.count()); }

    friend bool operator==(const Digraph& a, const Digraph& b);

protected:
    BoolMatrix edges_;
    std::optional<MatrixXd> weights_;
    std::vector<std::string> labels_;
};

/// A Digraph whose edge relation is acyclic; construction throws otherwise.
class Dag : public Digraph {
public:
    Dag() = default;
    explicit Dag(BoolMatrix edges, std::vector<std::string> labels = {});
    Dag(BoolMatrix edges, MatrixXd weights, std::vector<std::string> labels = {});
    explicit Dag(const Digraph& graph);
};

/// Partially directed graph. Holds CPDAGs (Markov equivalence classes) as
/// well as the intermediate partially oriented graphs inside PC and IAMB.
class Cpdag {
public:
    Cpdag() = default;
    Cpdag(BoolMatrix directed, BoolMatrix undirected, std::vector<std::string> labels = {});

    int n_nodes() const { return static_cast<int>(directed_.rows()); }
    const BoolMatrix& directed() const { return directed_; }
    const BoolMatrix& undirected() const { return undirected_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool is_directed(int from, int to) const { return directed_(from, to); }
    bool is_undirected(int a, int b) const { return undirected_(a, b); }
    bool adjacent(int a, int b) const {
        return directed_(a, b) || directed_(b, a) || undirected_(a, b);
    }
    BoolMatrix skeleton() const;
    int edge_count() const;

    friend bool operator==(const Cpdag& a, const Cpdag& b);

private:
    BoolMatrix directed_;
    BoolMatrix undirected_;
    std::vector<std::string> labels_;
};

/// Instantaneous matrix W0 plus lagged matrices A_1..A_L, all cause-by-effect.
class TemporalGraph {
public:
    TemporalGraph() = default;
    TemporalGraph(MatrixXd intra, std::vector<MatrixXd> lagged, std::vector<std::string> labels = {});

    int n_nodes() const { return static_cast<int>(intra_.rows()); }
    int max_lag() const { return static_cast<int>(lagged_.size()); }
    const MatrixXd& intra() const { return intra_; }
    const std::vector<MatrixXd>& lagged() const { return lagged_; }
    /// Lag k in 1..max_lag.
    const MatrixXd& lag(int k) const { return lagged_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    MatrixXd intra_;
    std::vector<MatrixXd> lagged_;
    std::vector<std::string> labels_;
};

struct EdgeMetrics {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int shd = 0;
};

// ---- structural queries -------------------------------------------------

std::optional<std::vector<int>> topological_order(const BoolMatrix& edges);
bool is_acyclic(const BoolMatrix& edges);
/// Nodes of one directed cycle in order (first node not repeated); empty if acyclic.
std::vector<int> find_cycle(const BoolMatrix& edges);

// ---- generation and equivalence classes ---------------------------------

Dag erdos_renyi_dag(int n_nodes, double edge_prob, std::uint64_t seed);

Cpdag dag_to_cpdag(const Dag& dag);
Cpdag meek_closure(const Cpdag& pdag);
/// Uniformly random consistent extension of `cpdag`, deterministic per seed.
Dag cpdag_to_dag(const Cpdag& cpdag, std::uint64_t seed);
/// Same skeleton, every directed edge kept, acyclic, identical v-structures.
bool is_consistent_extension(const Cpdag& pdag, const BoolMatrix& dag);
/// Extension of `cpdag` that agrees with the reference `truth` wherever the
/// class allows: undirected edges present in `truth` are oriented its way one
/// at a time under Meek closure, the rest low index to high. Used to score an
/// equivalence class against a known DAG. A pdag with no consistent extension
/// gets its undirected edges oriented by the reference, cycles permitted.
BoolMatrix best_matching_extension(const Cpdag& cpdag, const BoolMatrix& truth);

// ---- evaluation ---------------------------------------------------------

EdgeMetrics structural_metrics(const BoolMatrix& predicted, const BoolMatrix& truth);
inline EdgeMetrics structural_metrics(const Digraph& predicted, const Digraph& truth) {
    return structural_metrics(predicted.edges(), truth.edges());
}
Digraph summary_graph(const TemporalGraph& tg);

// ---- serialization ------------------------------------------------------

nlohmann::json to_json(const Digraph& graph);
nlohmann::json to_json(const Cpdag& graph);
nlohmann::json to_json(const TemporalGraph& graph);
Digraph digraph_from_json(const nlohmann::json& j);
Cpdag cpdag_from_json(const nlohmann::json& j);
TemporalGraph temporal_graph_from_json(const nlohmann::json& j);

std::string to_adjacency_csv(const Digraph& graph);
Digraph digraph_from_adjacency_csv(const std::string& text);

}  // namespace causal_atlas
