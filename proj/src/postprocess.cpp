#include <algorithm>
#include <cctype>
#include <cstdio>
#include <thread>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/postprocess.hpp"
#include "causal_atlas/random.hpp"

namespace causal_atlas {

// ---- bootstrap ----------------------------------------------------------

std::vector<Index> bootstrap_rows(Index n_rows, Index block_length, std::uint64_t seed, std::uint64_t replicate) {
    Rng rng = make_rng(seed, replicate);
    block_length = std::clamp<Index>(block_length, 1, std::max<Index>(1, n_rows));
    std::uniform_int_distribution<Index> start(0, n_rows - block_length);
    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(n_rows));
    while (static_cast<Index>(rows.size()) < n_rows) {
        Index s = start(rng);
        for (Index k = 0; k < block_length && static_cast<Index>(rows.size()) < n_rows; ++k) rows.push_back(s + k);
    }
    return rows;
}

namespace {

Dataset resample(const Dataset& data, const std::vector<Index>& rows, bool time_series) {
    MatrixXd values(static_cast<Index>(rows.size()), data.n_columns());
    for (Index r = 0; r < values.rows(); ++r) values.row(r) = data.values().row(rows[static_cast<std::size_t>(r)]);
    std::optional<IntVector> domain;
    if (data.domain_index()) {
        domain = IntVector(values.rows());
        for (Index r = 0; r < values.rows(); ++r) (*domain)(r) = (*data.domain_index())(rows[static_cast<std::size_t>(r)]);
    }
    std::optional<IntVector> time;
    if (time_series) time = IntVector::LinSpaced(values.rows(), 0, static_cast<int>(values.rows()) - 1);
    return Dataset(std::move(values), data.columns(), std::move(domain), std::move(time));
}

MatrixXd vote(const AlgorithmOutput& out) {
    MatrixXd v = out.directed.cast<double>();
    if (out.kind == OutputKind::cpdag) v += 0.5 * out.undirected.cast<double>();
    v.diagonal().setZero();
    return v;
}

}  // namespace

EdgeConfidence bootstrap_edge_frequencies(const Dataset& data, const std::string& algorithm, const nlohmann::json& config,
                                          int b_samples, std::uint64_t seed, int parallelism, const CancelToken& cancel) {
    if (b_samples < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least one replicate");
    const AlgorithmInfo& info = algorithm_info(algorithm);
    const bool time_series = info.data_kind == DataKind::time_series;
    Index block = 1;
    if (time_series) {
        int lag = config.is_object() && config.contains("lag") && config["lag"].is_number_integer() ? config["lag"].get<int>() : 3;
        block = 2 * std::max(1, lag);
    }
    const Index p = data.n_columns();
    std::vector<std::optional<MatrixXd>> votes(static_cast<std::size_t>(b_samples));
    std::vector<std::string> errors(static_cast<std::size_t>(b_samples));

    auto replicate = [&](int k) {
        try {
            cancel.check();
            Dataset d = resample(data, bootstrap_rows(data.n_samples(), block, seed, static_cast<std::uint64_t>(k)), time_series);
            votes[static_cast<std::size_t>(k)] = vote(run_algorithm(algorithm, d, config, cancel));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Cancelled) throw;
            errors[static_cast<std::size_t>(k)] = e.what();
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(k)] = e.what();
        }
    };
    const int workers = std::clamp(parallelism, 1, b_samples);
    if (workers == 1) {
        for (int k = 0; k < b_samples; ++k) replicate(k);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int k = w; k < b_samples; k += workers) replicate(k);
                } catch (...) {
                    failures[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    EdgeConfidence conf;
    conf.frequency = MatrixXd::Zero(p, p);
    conf.b_samples = b_samples;
    for (int k = 0; k < b_samples; ++k) {
        if (votes[static_cast<std::size_t>(k)]) {
            conf.frequency += *votes[static_cast<std::size_t>(k)];
            ++conf.completed;
        } else {
            conf.skipped.push_back("replicate " + std::to_string(k) + ": " + errors[static_cast<std::size_t>(k)]);
        }
    }
    if (conf.completed == 0)
        throw Error(ErrorCode::NonConvergence, "all " + std::to_string(b_samples) + " bootstrap replicates failed; first: " +
                                                   errors.front());
    conf.frequency /= static_cast<double>(conf.completed);
    return conf;
}

nlohmann::json to_json(const EdgeConfidence& c) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < c.frequency.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < c.frequency.cols(); ++j) row.push_back(c.frequency(i, j));
        rows.push_back(row);
    }
    return {{"frequency", rows}, {"b_samples", c.b_samples}, {"completed", c.completed}, {"skipped", c.skipped}};
}

EdgeConfidence edge_confidence_from_json(const nlohmann::json& j) {
    EdgeConfidence c;
    const auto& rows = j.at("frequency");
    const Index n = static_cast<Index>(rows.size());
    c.frequency = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "frequency matrix must be square");
        for (Index k = 0; k < n; ++k) c.frequency(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
    }
    c.b_samples = j.value("b_samples", 0);
    c.completed = j.value("completed", c.b_samples);
    c.skipped = j.value("skipped", std::vector<std::string>{});
    return c;
}

// ---- refinement ---------------------------------------------------------

namespace {

std::string edge_name(int a, int b) { return std::to_string(a) + "->" + std::to_string(b); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

/// Deletes cycle edges until acyclic; `removable` and `cost` pick the victim
/// (lowest cost, then lowest (from, to)).
template <class Removable, class Cost>
void break_cycles(BoolMatrix& g, Removable removable, Cost cost, std::vector<std::string>* log) {
    for (std::vector<int> cycle = find_cycle(g); !cycle.empty(); cycle = find_cycle(g)) {
        int best_from = -1, best_to = -1;
        double best = 0.0;
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            int a = cycle[k], b = cycle[(k + 1) % cycle.size()];
            if (!removable(a, b)) continue;
            double c = cost(a, b);
            if (best_from < 0 || c < best || (c == best && std::pair{a, b} < std::pair{best_from, best_to}))
                best = c, best_from = a, best_to = b;
        }
        if (best_from < 0) throw Error(ErrorCode::CycleFromConstraints, "cycle consists of required edges only");
        g(best_from, best_to) = false;
        if (log) log->push_back("cycle repair: removed " + edge_name(best_from, best_to) + " (frequency " + fmt(cost(best_from, best_to)) + ")");
    }
}

}  // namespace

RefineResult refine_graph(const BoolMatrix& graph, const EdgeConfidence& conf, double hi, double lo, bool require_acyclic) {
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "refine needs lo < hi");
    const Index n = graph.rows();
    if (graph.cols() != n || conf.frequency.rows() != n || conf.frequency.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "graph and confidence sizes differ");
    const MatrixXd& f = conf.frequency;
    RefineResult res;
    res.graph = graph;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && graph(i, j) && f(i, j) <= lo) {
                res.graph(i, j) = false;
                res.log.push_back("removed " + edge_name(i, j) + " (frequency " + fmt(f(i, j)) + ")");
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !graph(i, j) && f(i, j) >= hi) {
                res.graph(i, j) = true;
                res.log.push_back("added " + edge_name(i, j) + " (frequency " + fmt(f(i, j)) + ")");
            }
    if (require_acyclic)
        break_cycles(res.graph, [](int, int) { return true; }, [&](int a, int b) { return f(a, b); }, &res.log);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && f(i, j) > lo && f(i, j) < hi) res.uncertain.push_back({i, j, f(i, j), static_cast<bool>(res.graph(i, j))});
    return res;
}

// ---- constraints --------------------------------------------------------

nlohmann::json to_json(const ConstraintSet& c) {
    nlohmann::json req = nlohmann::json::array(), forb = nlohmann::json::array();
    for (const auto& [a, b] : c.required) req.push_back({a, b});
    for (const auto& [a, b] : c.forbidden) forb.push_back({a, b});
    return {{"required", req}, {"forbidden", forb}, {"forbidden_as_effect", c.forbidden_as_effect}};
}

namespace {

std::string node_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error(ErrorCode::InvalidArgument, "constraint endpoints must be labels or indices");
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(const nlohmann::json& j, const char* key) {
    std::vector<std::pair<std::string, std::string>> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a list of pairs");
    for (const auto& e : j[key]) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::InvalidArgument, std::string(key) + " entries must be [from, to]");
        out.emplace_back(node_text(e[0]), node_text(e[1]));
    }
    return out;
}

int node_index(const std::string& name, const std::vector<std::string>& labels) {
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == name) return static_cast<int>(k);
    if (!name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        std::size_t k = std::stoul(name);
        if (k < labels.size()) return static_cast<int>(k);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown node '" + name + "' in constraints");
}

}  // namespace

ConstraintSet constraint_set_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "constraints must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (key != "required" && key != "forbidden" && key != "forbidden_as_effect")
            throw Error(ErrorCode::InvalidArgument, "unknown constraint key '" + key + "'");
    ConstraintSet c;
    c.required = pairs_from_json(j, "required");
    c.forbidden = pairs_from_json(j, "forbidden");
    if (j.contains("forbidden_as_effect")) {
        if (!j["forbidden_as_effect"].is_array()) throw Error(ErrorCode::InvalidArgument, "forbidden_as_effect must be a list");
        for (const auto& v : j["forbidden_as_effect"]) c.forbidden_as_effect.push_back(node_text(v));
    }
    return c;
}

ConstraintSet merge_constraints(const std::vector<ConstraintSet>& sets) {
    ConstraintSet out;
    auto add = [](auto& dst, const auto& v) {
        if (std::find(dst.begin(), dst.end(), v) == dst.end()) dst.push_back(v);
    };
    for (const auto& s : sets) {
        for (const auto& e : s.required) add(out.required, e);
        for (const auto& e : s.forbidden) add(out.forbidden, e);
        for (const auto& v : s.forbidden_as_effect) add(out.forbidden_as_effect, v);
    }
    return out;
}

ResolvedConstraints resolve_constraints(const ConstraintSet& c, const std::vector<std::string>& labels, bool require_acyclic) {
    ResolvedConstraints r;
    const int n = static_cast<int>(labels.size());
    auto resolve_pair = [&](const std::pair<std::string, std::string>& e) {
        int a = node_index(e.first, labels), b = node_index(e.second, labels);
        if (a == b) throw Error(ErrorCode::InvalidArgument, "constraint " + e.first + " -> " + e.second + " is a self-loop");
        return std::pair{a, b};
    };
    for (const auto& e : c.required) r.required.push_back(resolve_pair(e));
    for (const auto& e : c.forbidden) r.forbidden.push_back(resolve_pair(e));
    for (const auto& v : c.forbidden_as_effect) r.forbidden_as_effect.push_back(node_index(v, labels));

    BoolMatrix req = BoolMatrix::Constant(n, n, false);
    for (auto [a, b] : r.required) req(a, b) = true;
    auto name = [&](int a, int b) { return labels[static_cast<std::size_t>(a)] + " -> " + labels[static_cast<std::size_t>(b)]; };
    for (auto [a, b] : r.forbidden)
        if (req(a, b)) throw Error(ErrorCode::ConflictingConstraints, name(a, b) + " is both required and forbidden");
    for (auto [a, b] : r.required) {
        if (req(b, a)) throw Error(ErrorCode::ConflictingConstraints, name(a, b) + " and its reverse are both required");
        for (int v : r.forbidden_as_effect)
            if (v == b)
                throw Error(ErrorCode::ConflictingConstraints,
                            name(a, b) + " is required but " + labels[static_cast<std::size_t>(b)] + " cannot be an effect");
    }
    if (require_acyclic && !is_acyclic(req)) throw Error(ErrorCode::CycleFromConstraints, "required edges form a cycle");
    return r;
}

BoolMatrix apply_constraints(const BoolMatrix& graph, const ConstraintSet& c, const std::vector<std::string>& labels,
                             const std::optional<MatrixXd>& frequency, bool require_acyclic) {
    const Index n = graph.rows();
    if (graph.cols() != n || static_cast<Index>(labels.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "graph and labels sizes differ");
    if (frequency && (frequency->rows() != n || frequency->cols() != n))
        throw Error(ErrorCode::DimensionMismatch, "frequency matrix size differs from graph");
    ResolvedConstraints r = resolve_constraints(c, labels, require_acyclic);
    BoolMatrix g = graph;
    for (auto [a, b] : r.forbidden) g(a, b) = false;
    for (int v : r.forbidden_as_effect) g.col(v).setConstant(false);
    BoolMatrix req = BoolMatrix::Constant(n, n, false);
    for (auto [a, b] : r.required) {
        g(a, b) = true;
        g(b, a) = false;
        req(a, b) = true;
    }
    if (require_acyclic)
        break_cycles(
            g, [&](int a, int b) { return !req(a, b); }, [&](int a, int b) { return frequency ? (*frequency)(a, b) : 0.0; }, nullptr);
    return g;
}

EdgeConfidence constrain_confidence(const EdgeConfidence& conf, const ConstraintSet& c, const std::vector<std::string>& labels) {
    ResolvedConstraints r = resolve_constraints(c, labels, false);
    EdgeConfidence out = conf;
    for (auto [a, b] : r.forbidden) out.frequency(a, b) = 0.0;
    for (int v : r.forbidden_as_effect) out.frequency.col(v).setZero();
    for (auto [a, b] : r.required) out.frequency(a, b) = 1.0, out.frequency(b, a) = 0.0;
    return out;
}

}  // namespace causal_atlas
