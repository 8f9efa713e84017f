#include <algorithm>
#include <set>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/discovery.hpp"
#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/error.hpp"

namespace causal_atlas {

std::string to_string(OutputKind k) {
    switch (k) {
        case OutputKind::dag: return "dag";
        case OutputKind::cpdag: return "cpdag";
        case OutputKind::summary: return "summary";
        case OutputKind::temporal: return "temporal";
    }
    return "dag";
}

const std::vector<AlgorithmInfo>& algorithm_catalog() {
    static const std::vector<AlgorithmInfo> catalog = {
        {"direct_lingam", DataKind::tabular, OutputKind::dag},
        {"dynotears", DataKind::time_series, OutputKind::temporal},
        {"granger_multivariate", DataKind::time_series, OutputKind::summary},
        {"granger_pairwise", DataKind::time_series, OutputKind::summary},
        {"iamb", DataKind::tabular, OutputKind::cpdag},
        {"notears_linear", DataKind::tabular, OutputKind::dag},
        {"pc", DataKind::tabular, OutputKind::cpdag},
        {"score_search", DataKind::tabular, OutputKind::cpdag},
        {"var_lingam", DataKind::time_series, OutputKind::temporal},
    };
    return catalog;
}

const AlgorithmInfo& algorithm_info(const std::string& id) {
    for (const auto& a : algorithm_catalog())
        if (a.id == id) return a;
    throw Error(ErrorCode::UnknownAlgorithm, "unknown algorithm '" + id + "'");
}

namespace {

class Params {
public:
    Params(const std::string& algo, const nlohmann::json& j) : algo_(algo), j_(j.is_null() ? nlohmann::json::object() : j) {
        if (!j_.is_object()) throw Error(ErrorCode::InvalidArgument, "configuration for " + algo + " must be an object");
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return fallback;
        try {
            return j_[key].get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::InvalidArgument, algo_ + ": parameter '" + key + "' has the wrong type");
        }
    }

    std::optional<int> get_optional_int(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        return get<int>(key, 0);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key()))
                throw Error(ErrorCode::InvalidArgument, algo_ + ": unknown parameter '" + it.key() + "'");
    }

private:
    std::string algo_;
    nlohmann::json j_;
    std::set<std::string> used_;
};

AlgorithmOutput from_cpdag(const Cpdag& c) {
    AlgorithmOutput out;
    out.kind = OutputKind::cpdag;
    out.directed = c.directed();
    out.undirected = c.undirected();
    return out;
}

AlgorithmOutput from_dag(const Dag& d) {
    AlgorithmOutput out;
    out.kind = OutputKind::dag;
    out.directed = d.edges();
    out.undirected = BoolMatrix::Constant(d.n_nodes(), d.n_nodes(), false);
    out.weights = d.weights();
    return out;
}

AlgorithmOutput from_temporal(const TemporalGraph& tg) {
    AlgorithmOutput out;
    out.kind = OutputKind::temporal;
    out.directed = summary_graph(tg).edges();
    out.undirected = BoolMatrix::Constant(tg.n_nodes(), tg.n_nodes(), false);
    out.temporal = tg;
    return out;
}

AlgorithmOutput from_summary(const Digraph& g) {
    AlgorithmOutput out;
    out.kind = OutputKind::summary;
    out.directed = g.edges();
    out.undirected = BoolMatrix::Constant(g.n_nodes(), g.n_nodes(), false);
    return out;
}

int lag_param(Params& p) {
    int lag = p.get<int>("lag", 3);
    if (lag < 1) throw Error(ErrorCode::InvalidArgument, "lag must be at least 1");
    return lag;
}

}  // namespace

AlgorithmOutput run_algorithm(const std::string& id, const Dataset& data, const nlohmann::json& config,
                              const CancelToken& cancel) {
    const AlgorithmInfo& info = algorithm_info(id);
    Params p(id, config);
    AlgorithmOutput out;
    if (id == "pc") {
        PcConfig cfg;
        cfg.alpha = p.get<double>("alpha", cfg.alpha);
        cfg.test = parse_ci_test(p.get<std::string>("test", to_string(cfg.test)));
        cfg.max_depth = p.get_optional_int("max_depth");
        p.finish();
        out = from_cpdag(pc(data, cfg, cancel));
    } else if (id == "score_search") {
        ScoreConfig cfg;
        cfg.penalty_multiplier = p.get<double>("penalty_multiplier", cfg.penalty_multiplier);
        cfg.max_in_degree = p.get_optional_int("max_in_degree");
        p.finish();
        out = from_cpdag(score_search(data, cfg, cancel));
    } else if (id == "notears_linear") {
        NotearsConfig cfg;
        cfg.lambda1 = p.get<double>("lambda1", cfg.lambda1);
        cfg.w_threshold = p.get<double>("w_threshold", cfg.w_threshold);
        cfg.max_outer = p.get<int>("max_outer", cfg.max_outer);
        p.finish();
        NotearsResult r = notears_linear_full(data, cfg, cancel);
        out = from_dag(r.dag);
        if (!r.converged) out.warnings.push_back("acyclicity not reached; weakest cycle edges were dropped");
    } else if (id == "direct_lingam") {
        double alpha = p.get<double>("prune_alpha", 0.05);
        p.finish();
        out = from_dag(direct_lingam(data, alpha, cancel));
    } else if (id == "iamb") {
        double alpha = p.get<double>("alpha", 0.05);
        CiTestKind test = parse_ci_test(p.get<std::string>("test", "fisher_z"));
        p.finish();
        out = from_cpdag(iamb_cpdag(data, alpha, test, cancel));
    } else if (id == "granger_pairwise" || id == "granger_multivariate") {
        GrangerConfig cfg;
        cfg.max_lag = lag_param(p);
        cfg.alpha = p.get<double>("alpha", cfg.alpha);
        cfg.benjamini_hochberg = p.get<bool>("benjamini_hochberg", cfg.benjamini_hochberg);
        p.finish();
        GrangerResult r = id == "granger_pairwise" ? granger_pairwise(data, cfg, cancel) : granger_multivariate(data, cfg, cancel);
        out = from_summary(r.graph);
    } else if (id == "var_lingam") {
        int lag = lag_param(p);
        double prune = p.get<double>("prune_threshold", 0.05);
        p.finish();
        VarLingamResult r = var_lingam_full(data, lag, prune, cancel);
        out = from_temporal(r.graph);
        if (r.low_confidence) out.warnings.push_back("VAR residuals look Gaussian; instantaneous orientations are unreliable");
    } else if (id == "dynotears") {
        DynotearsConfig cfg;
        cfg.lag = lag_param(p);
        cfg.lambda_w = p.get<double>("lambda_w", cfg.lambda_w);
        cfg.lambda_a = p.get<double>("lambda_a", cfg.lambda_a);
        cfg.notears.w_threshold = p.get<double>("w_threshold", cfg.notears.w_threshold);
        p.finish();
        DynotearsResult r = dynotears_full(data, cfg, cancel);
        out = from_temporal(r.graph);
        if (!r.converged) out.warnings.push_back("acyclicity not reached; weakest cycle edges were dropped");
    }
    out.algorithm = info.id;
    out.labels = data.names();
    return out;
}

BoolMatrix evaluation_matrix(const AlgorithmOutput& out, const BoolMatrix& truth) {
    if (out.kind == OutputKind::cpdag) return best_matching_extension(Cpdag(out.directed, out.undirected), truth);
    return out.directed;
}

BoolMatrix representative_graph(const AlgorithmOutput& out, std::uint64_t seed) {
    if (out.kind != OutputKind::cpdag) return out.directed;
    Cpdag c(out.directed, out.undirected);
    try {
        return cpdag_to_dag(c, seed).edges();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConsistentExtension) throw;
        return best_matching_extension(c, BoolMatrix::Constant(c.n_nodes(), c.n_nodes(), false));
    }
}

nlohmann::json to_json(const AlgorithmOutput& out) {
    nlohmann::json edges = nlohmann::json::array();
    const int n = out.n_nodes();
    auto name = [&](int i) { return out.labels.empty() ? "X" + std::to_string(i) : out.labels[static_cast<std::size_t>(i)]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (out.directed(i, j)) {
                nlohmann::json e = {{"from", name(i)}, {"to", name(j)}, {"type", "directed"}};
                if (out.weights) e["weight"] = (*out.weights)(i, j);
                edges.push_back(e);
            } else if (j > i && out.undirected(i, j)) {
                edges.push_back({{"from", name(i)}, {"to", name(j)}, {"type", "undirected"}});
            }
        }
    nlohmann::json j = {{"algorithm", out.algorithm}, {"kind", to_string(out.kind)}, {"nodes", out.labels},
                        {"edges", edges}, {"warnings", out.warnings}};
    if (out.temporal) j["temporal"] = to_json(*out.temporal);
    return j;
}

}  // namespace causal_atlas
