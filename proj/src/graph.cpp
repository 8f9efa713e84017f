#include "causal_atlas/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "causal_atlas/error.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/text.hpp"

namespace causal_atlas {

std::vector<std::string> default_labels(int n_nodes) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) labels.push_back("X" + std::to_string(i));
    return labels;
}

namespace {

std::vector<std::string> resolve_labels(std::vector<std::string> labels, Index n) {
    if (labels.empty()) return default_labels(static_cast<int>(n));
    if (static_cast<Index>(labels.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "label count does not match node count");
    return labels;
}

void require_square(const BoolMatrix& m, const char* what) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
}

void require_zero_diagonal(const BoolMatrix& m, const char* what) {
    for (Index i = 0; i < m.rows(); ++i)
        if (m(i, i)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has a self-loop");
}

}  // namespace

// ---- Digraph / Dag ------------------------------------------------------

Digraph::Digraph(BoolMatrix edges, std::vector<std::string> labels) : edges_(std::move(edges)) {
    require_square(edges_, "adjacency");
    require_zero_diagonal(edges_, "adjacency");
    labels_ = resolve_labels(std::move(labels), edges_.rows());
}

Digraph::Digraph(BoolMatrix edges, MatrixXd weights, std::vector<std::string> labels)
    : Digraph(std::move(edges), std::move(labels)) {
    if (weights.rows() != edges_.rows() || weights.cols() != edges_.cols())
        throw Error(ErrorCode::DimensionMismatch, "weights shape differs from adjacency");
    for (Index i = 0; i < weights.rows(); ++i)
        for (Index j = 0; j < weights.cols(); ++j)
            if (edges_(i, j) != (weights(i, j) != 0.0))
                throw Error(ErrorCode::InvalidArgument, "weights must be nonzero exactly on edges");
    weights_ = std::move(weights);
}

bool operator==(const Digraph& a, const Digraph& b) {
    if (a.edges_.rows() != b.edges_.rows() || a.edges_ != b.edges_ || a.labels_ != b.labels_) return false;
    if (a.weights_.has_value() != b.weights_.has_value()) return false;
    return !a.weights_ || *a.weights_ == *b.weights_;
}

Dag::Dag(BoolMatrix edges, std::vector<std::string> labels) : Digraph(std::move(edges), std::move(labels)) {
    if (!is_acyclic(edges_)) throw Error(ErrorCode::InvalidArgument, "graph contains a directed cycle");
}

Dag::Dag(BoolMatrix edges, MatrixXd weights, std::vector<std::string> labels)
    : Digraph(std::move(edges), std::move(weights), std::move(labels)) {
    if (!is_acyclic(edges_)) throw Error(ErrorCode::InvalidArgument, "graph contains a directed cycle");
}

Dag::Dag(const Digraph& graph) : Digraph(graph) {
    if (!is_acyclic(edges_)) throw Error(ErrorCode::InvalidArgument, "graph contains a directed cycle");
}

// ---- Cpdag --------------------------------------------------------------

Cpdag::Cpdag(BoolMatrix directed, BoolMatrix undirected, std::vector<std::string> labels)
    : directed_(std::move(directed)), undirected_(std::move(undirected)) {
    require_square(directed_, "directed part");
    require_square(undirected_, "undirected part");
    if (directed_.rows() != undirected_.rows())
        throw Error(ErrorCode::DimensionMismatch, "directed and undirected parts differ in size");
    require_zero_diagonal(directed_, "directed part");
    require_zero_diagonal(undirected_, "undirected part");
    const Index n = directed_.rows();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (undirected_(i, j) != undirected_(j, i))
                throw Error(ErrorCode::InvalidArgument, "undirected part is not symmetric");
            if (undirected_(i, j) && (directed_(i, j) || directed_(j, i)))
                throw Error(ErrorCode::InvalidArgument, "pair is both directed and undirected");
            if (directed_(i, j) && directed_(j, i))
                throw Error(ErrorCode::InvalidArgument, "pair is directed both ways");
        }
    }
    labels_ = resolve_labels(std::move(labels), n);
}

BoolMatrix Cpdag::skeleton() const {
    BoolMatrix s = directed_ || BoolMatrix(directed_.transpose());
    return s || undirected_;
}

int Cpdag::edge_count() const {
    return static_cast<int>(directed_.count() + undirected_.count() / 2);
}

bool operator==(const Cpdag& a, const Cpdag& b) {
    return a.n_nodes() == b.n_nodes() && a.directed_ == b.directed_ && a.undirected_ == b.undirected_ &&
           a.labels_ == b.labels_;
}

// ---- TemporalGraph ------------------------------------------------------

TemporalGraph::TemporalGraph(MatrixXd intra, std::vector<MatrixXd> lagged, std::vector<std::string> labels)
    : intra_(std::move(intra)), lagged_(std::move(lagged)) {
    if (intra_.rows() != intra_.cols()) throw Error(ErrorCode::DimensionMismatch, "intra matrix must be square");
    for (const auto& a : lagged_)
        if (a.rows() != intra_.rows() || a.cols() != intra_.cols())
            throw Error(ErrorCode::DimensionMismatch, "lagged matrix shape differs from intra matrix");
    BoolMatrix support = intra_.array() != 0.0;
    require_zero_diagonal(support, "intra matrix");
    if (!is_acyclic(support)) throw Error(ErrorCode::InvalidArgument, "intra matrix contains a cycle");
    labels_ = resolve_labels(std::move(labels), intra_.rows());
}

// ---- structural queries -------------------------------------------------

std::optional<std::vector<int>> topological_order(const BoolMatrix& edges) {
    const int n = static_cast<int>(edges.rows());
    std::vector<int> indegree(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (edges(i, j)) ++indegree[j];
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> ready;
    for (int i = n - 1; i >= 0; --i)
        if (indegree[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (int j = n - 1; j >= 0; --j)
            if (edges(v, j) && --indegree[j] == 0) ready.push_back(j);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

bool is_acyclic(const BoolMatrix& edges) { return topological_order(edges).has_value(); }

std::vector<int> find_cycle(const BoolMatrix& edges) {
    const int n = static_cast<int>(edges.rows());
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> state(n, 0), parent(n, -1);
    for (int root = 0; root < n; ++root) {
        if (state[root]) continue;
        std::vector<std::pair<int, int>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next >= n) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            int w = next++;
            if (!edges(v, w)) continue;
            if (state[w] == 1) {
                std::vector<int> cycle{w};
                for (int u = v; u != w; u = parent[u]) cycle.push_back(u);
                std::reverse(cycle.begin() + 1, cycle.end());
                return cycle;
            }
            if (state[w] == 0) {
                state[w] = 1;
                parent[w] = v;
                stack.emplace_back(w, 0);
            }
        }
    }
    return {};
}

// ---- generation ---------------------------------------------------------

Dag erdos_renyi_dag(int n_nodes, double edge_prob, std::uint64_t seed) {
    if (n_nodes < 1) throw Error(ErrorCode::InvalidArgument, "n_nodes must be at least 1");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "edge_prob must lie in [0, 1]");
    Rng rng = make_rng(seed);
    std::vector<int> order(static_cast<std::size_t>(n_nodes));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(edge_prob);
    BoolMatrix edges = BoolMatrix::Constant(n_nodes, n_nodes, false);
    for (int a = 0; a < n_nodes; ++a)
        for (int b = a + 1; b < n_nodes; ++b)
            if (coin(rng)) edges(order[a], order[b]) = true;
    return Dag(std::move(edges));
}

// ---- Meek rules ---------------------------------------------------------

namespace {

struct WorkingPdag {
    BoolMatrix dir;
    BoolMatrix und;

    int n() const { return static_cast<int>(dir.rows()); }
    bool adj(int a, int b) const { return dir(a, b) || dir(b, a) || und(a, b); }
    void orient(int from, int to) {
        und(from, to) = und(to, from) = false;
        dir(from, to) = true;
    }
};

bool meek_r1(const WorkingPdag& g, int a, int b) {
    for (int c = 0; c < g.n(); ++c)
        if (g.dir(c, a) && c != b && !g.adj(c, b)) return true;
    return false;
}

bool meek_r2(const WorkingPdag& g, int a, int b) {
    for (int c = 0; c < g.n(); ++c)
        if (g.dir(a, c) && g.dir(c, b)) return true;
    return false;
}

bool meek_r3(const WorkingPdag& g, int a, int b) {
    const int n = g.n();
    for (int c = 0; c < n; ++c) {
        if (!(g.und(a, c) && g.dir(c, b))) continue;
        for (int d = c + 1; d < n; ++d)
            if (g.und(a, d) && g.dir(d, b) && !g.adj(c, d)) return true;
    }
    return false;
}

bool meek_r4(const WorkingPdag& g, int a, int b) {
    const int n = g.n();
    for (int c = 0; c < n; ++c) {
        if (!(g.dir(c, b) && g.adj(a, c))) continue;
        for (int d = 0; d < n; ++d)
            if (d != b && g.dir(d, c) && g.und(a, d) && !g.adj(d, b)) return true;
    }
    return false;
}

void apply_meek(WorkingPdag& g) {
    const int n = g.n();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (!g.und(a, b)) continue;
                if (meek_r1(g, a, b) || meek_r2(g, a, b) || meek_r3(g, a, b) || meek_r4(g, a, b)) {
                    g.orient(a, b);
                    changed = true;
                }
            }
        }
    }
}

BoolMatrix v_structure_marks(const BoolMatrix& dir, const BoolMatrix& skeleton) {
    // marks(a, c) is true when a -> c is part of some v-structure a -> c <- b
    const Index n = dir.rows();
    BoolMatrix marks = BoolMatrix::Constant(n, n, false);
    for (Index c = 0; c < n; ++c)
        for (Index a = 0; a < n; ++a) {
            if (!dir(a, c)) continue;
            for (Index b = a + 1; b < n; ++b)
                if (dir(b, c) && !skeleton(a, b)) marks(a, c) = marks(b, c) = true;
        }
    return marks;
}

}  // namespace

Cpdag meek_closure(const Cpdag& pdag) {
    WorkingPdag g{pdag.directed(), pdag.undirected()};
    apply_meek(g);
    return Cpdag(std::move(g.dir), std::move(g.und), pdag.labels());
}

Cpdag dag_to_cpdag(const Dag& dag) {
    const int n = dag.n_nodes();
    const BoolMatrix& e = dag.edges();
    BoolMatrix skeleton = e || BoolMatrix(e.transpose());
    BoolMatrix vmarks = v_structure_marks(e, skeleton);
    WorkingPdag g{BoolMatrix::Constant(n, n, false), BoolMatrix::Constant(n, n, false)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!e(i, j)) continue;
            if (vmarks(i, j)) {
                g.dir(i, j) = true;
            } else {
                g.und(i, j) = g.und(j, i) = true;
            }
        }
    apply_meek(g);
    return Cpdag(std::move(g.dir), std::move(g.und), dag.labels());
}

bool is_consistent_extension(const Cpdag& pdag, const BoolMatrix& dag) {
    const Index n = pdag.n_nodes();
    if (dag.rows() != n || dag.cols() != n) return false;
    BoolMatrix skel = dag || BoolMatrix(dag.transpose());
    if (skel != pdag.skeleton()) return false;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (pdag.is_directed(i, j) && !dag(i, j)) return false;
    if (!is_acyclic(dag)) return false;
    // v-structures of the extension must be exactly those already in pdag
    BoolMatrix ours = v_structure_marks(dag, skel);
    BoolMatrix theirs = v_structure_marks(pdag.directed(), skel);
    return ours == theirs;
}

// ---- consistent extensions ----------------------------------------------

namespace {

/// Counts and samples acyclic moral orientations (AMOs) of chordal
/// undirected components. Every AMO has a unique source v; rooting at v and
/// closing under the Meek rules splits the rest into independent chordal
/// components, whose counts multiply.
class AmoSampler {
public:
    explicit AmoSampler(const BoolMatrix& undirected) : und_(undirected) {}

    long double count(const std::vector<int>& nodes) {
        if (nodes.size() <= 1) return 1.0L;
        if (auto it = memo_.find(nodes); it != memo_.end()) return it->second;
        long double total = 0.0L;
        for (int v : nodes) total += rooted_count(nodes, v);
        memo_.emplace(nodes, total);
        return total;
    }

    /// Writes a uniformly sampled AMO of `nodes` into `out`.
    void sample(const std::vector<int>& nodes, Rng& rng, BoolMatrix& out) {
        if (nodes.size() <= 1) return;
        const long double total = count(nodes);
        long double target = static_cast<long double>(uniform01(rng)) * total;
        int root = nodes.back();
        for (int v : nodes) {
            long double c = rooted_count(nodes, v);
            if (target < c) {
                root = v;
                break;
            }
            target -= c;
        }
        WorkingPdag rooted = root_and_close(nodes, root);
        for (int a : nodes)
            for (int b : nodes)
                if (rooted.dir(a, b)) out(a, b) = true;
        for (const auto& comp : components(rooted.und, nodes)) sample(comp, rng, out);
    }

    static std::vector<std::vector<int>> components(const BoolMatrix& und, const std::vector<int>& nodes) {
        std::vector<std::vector<int>> comps;
        std::vector<char> seen(static_cast<std::size_t>(und.rows()), 0);
        for (int start : nodes) {
            if (seen[start]) continue;
            std::vector<int> comp{start};
            seen[start] = 1;
            for (std::size_t k = 0; k < comp.size(); ++k)
                for (int w : nodes)
                    if (!seen[w] && und(comp[k], w)) {
                        seen[w] = 1;
                        comp.push_back(w);
                    }
            if (comp.size() > 1) {
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
        return comps;
    }

private:
    long double rooted_count(const std::vector<int>& nodes, int root) {
        WorkingPdag rooted = root_and_close(nodes, root);
        long double prod = 1.0L;
        for (const auto& comp : components(rooted.und, nodes)) prod *= count(comp);
        return prod;
    }

    WorkingPdag root_and_close(const std::vector<int>& nodes, int root) const {
        const Index n = und_.rows();
        WorkingPdag g{BoolMatrix::Constant(n, n, false), BoolMatrix::Constant(n, n, false)};
        for (int a : nodes)
            for (int b : nodes) g.und(a, b) = und_(a, b);
        for (int b : nodes)
            if (g.und(root, b)) g.orient(root, b);
        apply_meek(g);
        return g;
    }

    const BoolMatrix& und_;
    std::map<std::vector<int>, long double> memo_;
};

std::optional<BoolMatrix> dor_tarsi_extension(const Cpdag& pdag, Rng& rng) {
    const int n = pdag.n_nodes();
    BoolMatrix dir = pdag.directed();
    BoolMatrix und = pdag.undirected();
    BoolMatrix result = dir;
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    for (int removed = 0; removed < n; ++removed) {
        std::vector<int> candidates;
        for (int x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            bool sink = true;
            for (int y = 0; y < n && sink; ++y)
                if (alive[y] && dir(x, y)) sink = false;
            if (!sink) continue;
            bool ok = true;
            for (int y = 0; y < n && ok; ++y) {
                if (!alive[y] || !und(x, y)) continue;
                for (int z = 0; z < n && ok; ++z) {
                    if (!alive[z] || z == y) continue;
                    bool z_adj_x = dir(x, z) || dir(z, x) || und(x, z);
                    bool z_adj_y = dir(y, z) || dir(z, y) || und(y, z);
                    if (z_adj_x && !z_adj_y) ok = false;
                }
            }
            if (ok) candidates.push_back(x);
        }
        if (candidates.empty()) return std::nullopt;
        int x = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
        for (int y = 0; y < n; ++y)
            if (alive[y] && und(x, y)) result(y, x) = true;
        alive[x] = 0;
    }
    return result;
}

}  // namespace

Dag cpdag_to_dag(const Cpdag& cpdag, std::uint64_t seed) {
    const int n = cpdag.n_nodes();
    Rng rng = make_rng(seed);
    BoolMatrix result = cpdag.directed();
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    AmoSampler sampler(cpdag.undirected());
    for (const auto& comp : AmoSampler::components(cpdag.undirected(), all)) sampler.sample(comp, rng, result);
    if (is_consistent_extension(cpdag, result)) return Dag(std::move(result), cpdag.labels());

    // Not a completed class (e.g. a partially oriented PC output): fall back
    // to the Dor-Tarsi construction with random tie-breaking.
    if (auto ext = dor_tarsi_extension(cpdag, rng); ext && is_consistent_extension(cpdag, *ext))
        return Dag(std::move(*ext), cpdag.labels());
    throw Error(ErrorCode::NoConsistentExtension, "orientation constraints admit no consistent DAG");
}

BoolMatrix best_matching_extension(const Cpdag& cpdag, const BoolMatrix& truth) {
    const int n = cpdag.n_nodes();
    if (truth.rows() != n || truth.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "reference graph differs in node count");
    WorkingPdag g{cpdag.directed(), cpdag.undirected()};
    apply_meek(g);
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (!g.und(i, j)) continue;
                int from = i, to = j;
                if (truth(j, i)) std::swap(from, to);
                else if (!truth(i, j) && pass == 0) continue;
                g.und(i, j) = g.und(j, i) = false;
                g.dir(from, to) = true;
                apply_meek(g);
            }
    if (g.und.any() || !is_consistent_extension(cpdag, g.dir)) {
        // not a completed class: orient what is left by the reference, ignoring acyclicity
        BoolMatrix out = cpdag.directed();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (cpdag.is_undirected(i, j)) (truth(j, i) ? out(j, i) : out(i, j)) = true;
        return out;
    }
    return g.dir;
}

// ---- evaluation ---------------------------------------------------------

EdgeMetrics structural_metrics(const BoolMatrix& predicted, const BoolMatrix& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
        throw Error(ErrorCode::DimensionMismatch, "predicted and true graphs differ in node count");
    const Index n = truth.rows();
    EdgeMetrics m;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            bool p = predicted(i, j), t = truth(i, j);
            if (p && t) ++m.tp;
            if (p && !t) ++m.fp;
            if (!p && t) ++m.fn;
        }
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (predicted(i, j) != truth(i, j) || predicted(j, i) != truth(j, i)) ++m.shd;
    const int n_pred = m.tp + m.fp;
    const int n_true = m.tp + m.fn;
    if (n_pred == 0 && n_true == 0) {
        m.precision = m.recall = m.f1 = 1.0;
        return m;
    }
    m.precision = n_pred ? static_cast<double>(m.tp) / n_pred : 0.0;
    m.recall = n_true ? static_cast<double>(m.tp) / n_true : 0.0;
    const double denom = m.precision + m.recall;
    m.f1 = denom > 0 ? 2.0 * m.precision * m.recall / denom : 0.0;
    return m;
}

Digraph summary_graph(const TemporalGraph& tg) {
    const int n = tg.n_nodes();
    BoolMatrix edges = tg.intra().array() != 0.0;
    for (const auto& a : tg.lagged()) edges = edges || BoolMatrix(a.array() != 0.0);
    for (int i = 0; i < n; ++i) edges(i, i) = false;
    return Digraph(std::move(edges), tg.labels());
}

// ---- serialization ------------------------------------------------------

using nlohmann::json;

json to_json(const Digraph& graph) {
    json edges = json::array();
    const int n = graph.n_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!graph.has_edge(i, j)) continue;
            json e = {{"from", graph.labels()[i]}, {"to", graph.labels()[j]}, {"directed", true}};
            if (graph.weights()) e["weight"] = (*graph.weights())(i, j);
            edges.push_back(std::move(e));
        }
    return {{"nodes", graph.labels()}, {"edges", std::move(edges)}};
}

json to_json(const Cpdag& graph) {
    json edges = json::array();
    const int n = graph.n_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (graph.is_directed(i, j))
                edges.push_back({{"from", graph.labels()[i]}, {"to", graph.labels()[j]}, {"directed", true}});
            else if (i < j && graph.is_undirected(i, j))
                edges.push_back({{"from", graph.labels()[i]}, {"to", graph.labels()[j]}, {"directed", false}});
        }
    return {{"nodes", graph.labels()}, {"edges", std::move(edges)}};
}

namespace {

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from_json(const json& rows, Index n) {
    MatrixXd m = MatrixXd::Zero(n, n);
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "matrix row count mismatch");
    for (Index i = 0; i < n; ++i) {
        if (static_cast<Index>(rows[i].size()) != n) throw Error(ErrorCode::DimensionMismatch, "ragged matrix");
        for (Index j = 0; j < n; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

std::map<std::string, int> label_index(const std::vector<std::string>& labels) {
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!idx.emplace(labels[i], static_cast<int>(i)).second)
            throw Error(ErrorCode::InvalidArgument, "duplicate node label " + labels[i]);
    }
    return idx;
}

int lookup(const std::map<std::string, int>& idx, const std::string& label) {
    auto it = idx.find(label);
    if (it == idx.end()) throw Error(ErrorCode::InvalidArgument, "edge references unknown node " + label);
    return it->second;
}

}  // namespace

json to_json(const TemporalGraph& graph) {
    json lagged = json::array();
    for (const auto& a : graph.lagged()) lagged.push_back(matrix_to_json(a));
    return {{"nodes", graph.labels()},
            {"max_lag", graph.max_lag()},
            {"intra", matrix_to_json(graph.intra())},
            {"lagged", std::move(lagged)}};
}

Digraph digraph_from_json(const json& j) {
    auto labels = j.at("nodes").get<std::vector<std::string>>();
    auto idx = label_index(labels);
    const Index n = static_cast<Index>(labels.size());
    BoolMatrix edges = BoolMatrix::Constant(n, n, false);
    MatrixXd weights = MatrixXd::Zero(n, n);
    bool weighted = false;
    for (const auto& e : j.at("edges")) {
        int a = lookup(idx, e.at("from").get<std::string>());
        int b = lookup(idx, e.at("to").get<std::string>());
        edges(a, b) = true;
        if (e.contains("weight")) {
            weighted = true;
            weights(a, b) = e.at("weight").get<double>();
        }
    }
    if (weighted) return Digraph(std::move(edges), std::move(weights), std::move(labels));
    return Digraph(std::move(edges), std::move(labels));
}

Cpdag cpdag_from_json(const json& j) {
    auto labels = j.at("nodes").get<std::vector<std::string>>();
    auto idx = label_index(labels);
    const Index n = static_cast<Index>(labels.size());
    BoolMatrix dir = BoolMatrix::Constant(n, n, false);
    BoolMatrix und = BoolMatrix::Constant(n, n, false);
    for (const auto& e : j.at("edges")) {
        int a = lookup(idx, e.at("from").get<std::string>());
        int b = lookup(idx, e.at("to").get<std::string>());
        if (e.value("directed", true)) {
            dir(a, b) = true;
        } else {
            und(a, b) = und(b, a) = true;
        }
    }
    return Cpdag(std::move(dir), std::move(und), std::move(labels));
}

TemporalGraph temporal_graph_from_json(const json& j) {
    auto labels = j.at("nodes").get<std::vector<std::string>>();
    const Index n = static_cast<Index>(labels.size());
    MatrixXd intra = matrix_from_json(j.at("intra"), n);
    std::vector<MatrixXd> lagged;
    for (const auto& a : j.at("lagged")) lagged.push_back(matrix_from_json(a, n));
    return TemporalGraph(std::move(intra), std::move(lagged), std::move(labels));
}

std::string to_adjacency_csv(const Digraph& graph) {
    std::ostringstream out;
    const int n = graph.n_nodes();
    out << (graph.weights() ? "weight" : "");
    for (int j = 0; j < n; ++j) out << ',' << graph.labels()[j];
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << graph.labels()[i];
        for (int j = 0; j < n; ++j) {
            out << ',';
            if (graph.weights())
                out << format_double((*graph.weights())(i, j));
            else
                out << (graph.has_edge(i, j) ? '1' : '0');
        }
        out << '\n';
    }
    return out.str();
}

Digraph digraph_from_adjacency_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedCsv, "empty adjacency file");
    auto header = split(line, ',');
    if (header.empty()) throw Error(ErrorCode::MalformedCsv, "missing header");
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const Index n = static_cast<Index>(labels.size());
    BoolMatrix edges = BoolMatrix::Constant(n, n, false);
    MatrixXd weights = MatrixXd::Zero(n, n);
    const bool weighted = header[0] == "weight";
    for (Index i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error(ErrorCode::MalformedCsv, "adjacency has too few rows");
        auto cells = split(line, ',');
        if (static_cast<Index>(cells.size()) != n + 1 || cells[0] != labels[i])
            throw Error(ErrorCode::MalformedCsv, "adjacency row " + std::to_string(i + 1) + " malformed");
        for (Index j = 0; j < n; ++j) {
            double v = 0.0;
            if (!parse_double(cells[j + 1], v))
                throw Error(ErrorCode::MalformedCsv, "bad adjacency cell at row " + std::to_string(i + 1));
            weights(i, j) = v;
            edges(i, j) = v != 0.0;
        }
    }
    if (weighted) return Digraph(std::move(edges), std::move(weights), std::move(labels));
    return Digraph(std::move(edges), std::move(labels));
}

}  // namespace causal_atlas
