#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <set>
#include <variant>

#include "causal_atlas/error.hpp"
#include "causal_atlas/selector.hpp"
#include "causal_atlas/text.hpp"

#include <httplib.h>

namespace causal_atlas {

std::map<std::string, std::vector<BenchmarkRow>> embedded_benchmark_rows();

std::string to_string(Rating r) {
    switch (r) {
        case Rating::poor: return "Poor";
        case Rating::limited: return "Limited";
        case Rating::moderate: return "Moderate";
        case Rating::strong: return "Strong";
        case Rating::robust: return "Robust";
    }
    return "Moderate";
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::linear: return "linear";
        case Condition::nonlinear: return "nonlinear";
        case Condition::dense: return "dense";
        case Condition::sparse: return "sparse";
        case Condition::large_p: return "large_p";
        case Condition::non_gaussian: return "non_gaussian";
        case Condition::heterogeneous: return "heterogeneous";
        case Condition::missing_tolerant: return "missing_tolerant";
        case Condition::discrete_mix: return "discrete_mix";
    }
    return "linear";
}

const std::vector<Condition>& all_conditions() {
    static const std::vector<Condition> all = {Condition::linear,        Condition::nonlinear,     Condition::dense,
                                               Condition::sparse,        Condition::large_p,       Condition::non_gaussian,
                                               Condition::heterogeneous, Condition::missing_tolerant, Condition::discrete_mix};
    return all;
}

std::vector<Condition> active_conditions(const DatasetProfile& p) {
    std::vector<Condition> out;
    if (p.linearity == Linearity::linear) out.push_back(Condition::linear);
    if (p.linearity == Linearity::nonlinear) out.push_back(Condition::nonlinear);
    if (p.dense) out.push_back(*p.dense ? Condition::dense : Condition::sparse);
    if (p.n_vars >= kLargeP) out.push_back(Condition::large_p);
    if (p.gaussian_noise == NoiseVerdict::non_gaussian) out.push_back(Condition::non_gaussian);
    if (p.heterogeneous.value_or(false)) out.push_back(Condition::heterogeneous);
    if (p.missing_rate > 0.0) out.push_back(Condition::missing_tolerant);
    if (p.discrete_ratio > 0.0) out.push_back(Condition::discrete_mix);
    return out;
}

// ---- fingerprints -------------------------------------------------------

Fingerprint fingerprint(const DatasetProfile& p) {
    Fingerprint f;
    f.n_samples = static_cast<double>(p.n_samples);
    f.n_vars = static_cast<double>(p.n_vars);
    f.density = p.density;
    f.linear = p.linearity == Linearity::linear ? 1.0 : p.linearity == Linearity::nonlinear ? 0.0 : 0.5;
    f.gaussian = p.gaussian_noise == NoiseVerdict::gaussian ? 1.0 : p.gaussian_noise == NoiseVerdict::non_gaussian ? 0.0 : 0.5;
    return f;
}

double fingerprint_distance(const Fingerprint& a, const Fingerprint& b) {
    auto log_ratio = [](double x, double y) { return std::abs(std::log10(std::max(x, 1.0) / std::max(y, 1.0))); };
    double d = log_ratio(a.n_samples, b.n_samples) + log_ratio(a.n_vars, b.n_vars);
    if (a.density && b.density) d += std::abs(*a.density - *b.density);
    d += std::abs(a.linear - b.linear) + std::abs(a.gaussian - b.gaussian);
    return d;
}

namespace {

const BenchmarkRow* nearest_row(const AlgorithmEntry& e, const Fingerprint& f) {
    const BenchmarkRow* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& row : e.benchmark_rows) {
        double d = fingerprint_distance(f, row.fingerprint);
        if (d < best_d) best_d = d, best = &row;  // first row wins ties
    }
    return best;
}

using C = Condition;
using R = Rating;

AlgorithmEntry entry(std::string id, std::string family, DataKind kind, Index max_vars, bool continuous, bool non_gaussian,
                     std::map<Condition, RatingCell> ratings, nlohmann::json config) {
    AlgorithmEntry e;
    e.id = std::move(id);
    e.family = std::move(family);
    e.data_kind = kind;
    e.max_vars = max_vars;
    e.requires_continuous = continuous;
    e.requires_non_gaussian = non_gaussian;
    e.ratings = std::move(ratings);
    e.default_config = std::move(config);
    return e;
}

Registry build_registry() {
    const std::string s511 = "tabular benchmark: ";
    const std::string s512 = "time-series benchmark: ";
    const std::string appd = "robustness study: ";
    Registry r;
    r.push_back(entry("direct_lingam", "functional", DataKind::tabular, 100, true, true,
                      {{C::linear, {R::strong, s511 + "\"perfect identification in the linear non-Gaussian setting\""}},
                       {C::nonlinear, {R::poor, appd + "\"performance degrades significantly in the presence of Gaussian noise and non-linear settings\""}},
                       {C::dense, {R::moderate, "no density finding; neutral"}},
                       {C::sparse, {R::moderate, "no density finding; neutral"}},
                       {C::large_p, {R::moderate, "quadratic pairwise order search"}},
                       {C::non_gaussian, {R::robust, s511 + "\"DirectLiNGAM offers perfect identification capabilities\""}},
                       {C::heterogeneous, {R::limited, appd + "domain shifts act as hidden confounders"}},
                       {C::missing_tolerant, {R::limited, "imputed values are Gaussian-like and erode identifiability"}},
                       {C::discrete_mix, {R::poor, "continuous non-Gaussian model only"}}},
                      {{"prune_alpha", 0.05}}));
    r.push_back(entry("dynotears", "continuous_optimization", DataKind::time_series, 50, true, false,
                      {{C::linear, {R::robust, s512 + "\"DYNOTEARS emerges as a strong candidate\""}},
                       {C::nonlinear, {R::limited, "linear structural model"}},
                       {C::dense, {R::strong, appd + "\"DYNOTEARS and VARLiNGAM show greater resilience to variations in edge density\""}},
                       {C::sparse, {R::strong, appd + "robust to graph complexity"}},
                       {C::large_p, {R::limited, appd + "\"fail to complete execution within the imposed time limit\" at large p"}},
                       {C::non_gaussian, {R::moderate, "least-squares loss, noise-agnostic"}},
                       {C::heterogeneous, {R::limited, "stationary single-regime model"}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::poor, "continuous only"}}},
                      {{"lag", 3}, {"lambda_w", 0.05}, {"lambda_a", 0.05}, {"w_threshold", 0.1}}));
    r.push_back(entry("granger_multivariate", "granger", DataKind::time_series, 100, true, false,
                      {{C::linear, {R::strong, "VAR F-tests are exact under linear Gaussian dynamics"}},
                       {C::nonlinear, {R::limited, s512 + "\"fundamental drawbacks\""}},
                       {C::dense, {R::moderate, "numerator df grows with the lag block"}},
                       {C::sparse, {R::strong, "conditions away indirect paths"}},
                       {C::large_p, {R::limited, "full VAR per equation"}},
                       {C::non_gaussian, {R::moderate, "F-test relies on approximate normality"}},
                       {C::heterogeneous, {R::limited, "single regime"}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::poor, "continuous only"}}},
                      {{"lag", 3}, {"alpha", 0.05}}));
    r.push_back(entry("granger_pairwise", "granger", DataKind::time_series, 200, true, false,
                      {{C::linear, {R::strong, s512 + "\"pairwise Granger causality consistently achieves strong performance\""}},
                       {C::nonlinear, {R::limited, s512 + "\"fundamental drawbacks, which limit its applicability\""}},
                       {C::dense, {R::moderate, "spurious indirect edges grow with density"}},
                       {C::sparse, {R::strong, s512 + "strong across settings"}},
                       {C::large_p, {R::moderate, "p^2 small regressions"}},
                       {C::non_gaussian, {R::moderate, "F-test relies on approximate normality"}},
                       {C::heterogeneous, {R::limited, "single regime"}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::poor, "continuous only"}}},
                      {{"lag", 3}, {"alpha", 0.05}}));
    r.push_back(entry("iamb", "markov_blanket", DataKind::tabular, 200, false, false,
                      {{C::linear, {R::moderate, s511 + "constraint methods do not reach score-based peaks in linear settings"}},
                       {C::nonlinear, {R::strong, appd + "\"InterIAMB, BAMB, and PC with rcit test perform substantially better\""}},
                       {C::dense, {R::strong, appd + "\"MB-based methods ... exhibit greater robustness to increasing edge probability\""}},
                       {C::sparse, {R::moderate, "no sparse advantage reported"}},
                       {C::large_p, {R::moderate, "local searches per node"}},
                       {C::non_gaussian, {R::strong, appd + "\"Independence-test based methods ... remarkable stability\""}},
                       {C::heterogeneous, {R::strong, s511 + "\"InterIAMB with rcit outperform alternatives\""}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::strong, appd + "\"InterIAMB with RCIT maintain reasonable performance\""}}},
                      {{"alpha", 0.05}, {"test", "fisher_z"}}));
    r.push_back(entry("notears_linear", "continuous_optimization", DataKind::tabular, 100, true, false,
                      {{C::linear, {R::robust, s511 + "\"GOLEM and NOTEARSLinear excel in scenarios with linear relationships\""}},
                       {C::nonlinear, {R::poor, s511 + "\"performance significantly decreases when confronted with non-linear relationships\""}},
                       {C::dense, {R::robust, appd + "\"NOTEARS (Linear) demonstrates superior robustness to both sparse and dense graphs\""}},
                       {C::sparse, {R::robust, appd + "robust to sparse graphs"}},
                       {C::large_p, {R::limited, s511 + "complex optimization limits large-scale use"}},
                       {C::non_gaussian, {R::moderate, "least-squares loss, noise-agnostic"}},
                       {C::heterogeneous, {R::limited, appd + "\"continuous-optimization-based methods suffer from the hidden confounding effects\""}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::strong, appd + "\"only NOTEARS (Linear), GOLEM, and InterIAMB ... maintain reasonable performance\""}}},
                      {{"lambda1", 0.1}, {"w_threshold", 0.3}}));
    r.push_back(entry("pc", "constraint", DataKind::tabular, 200, false, false,
                      {{C::linear, {R::moderate, s511 + "\"Fisher-Z tests perform admirably in purely linear settings\""}},
                       {C::nonlinear, {R::moderate, s511 + "\"remarkable versatility across both linear and non-linear relationships\" (rank test here)"}},
                       {C::dense, {R::limited, s512 + "constraint-based structure is \"sensitive to changes in graph sparsity\""}},
                       {C::sparse, {R::strong, "sparse skeletons keep conditioning sets small"}},
                       {C::large_p, {R::moderate, s511 + "GPU PC scales; sequential here"}},
                       {C::non_gaussian, {R::strong, appd + "\"Independence-test based methods ... remarkable stability\""}},
                       {C::heterogeneous, {R::moderate, s511 + "constraint methods adapt to heterogeneous settings"}},
                       {C::missing_tolerant, {R::strong, appd + "\"PC with KCI, FCI with KCI and RCIT show stronger resilience\""}},
                       {C::discrete_mix, {R::strong, "chi-squared test for discrete columns"}}},
                      {{"alpha", 0.05}, {"test", "fisher_z"}}));
    r.push_back(entry("score_search", "score", DataKind::tabular, 200, false, false,
                      {{C::linear, {R::strong, s511 + "\"Score-based algorithms ... dominate in linear settings\""}},
                       {C::nonlinear, {R::limited, appd + "\"fundamentally limited in non-linear scenarios\""}},
                       {C::dense, {R::limited, appd + "\"their performance declines as edge probability increases\""}},
                       {C::sparse, {R::strong, appd + "\"maintain high F1 scores in sparse to moderately dense linear graphs\""}},
                       {C::large_p, {R::strong, s511 + "\"FGES variants demonstrate exceptional efficiency\""}},
                       {C::non_gaussian, {R::strong, appd + "\"still robust to the uniform noise type data\""}},
                       {C::heterogeneous, {R::limited, appd + "\"score-based methods ... suffer from the hidden confounding effects\""}},
                       {C::missing_tolerant, {R::moderate, "no finding; neutral"}},
                       {C::discrete_mix, {R::limited, appd + "\"the performance of score-based methods shows a pronounced drop\""}}},
                      {{"penalty_multiplier", 1.0}}));
    r.push_back(entry("var_lingam", "functional", DataKind::time_series, 500, true, true,
                      {{C::linear, {R::strong, "linear VAR plus LiNGAM"}},
                       {C::nonlinear, {R::poor, "linear model"}},
                       {C::dense, {R::strong, appd + "\"DYNOTEARS and VARLiNGAM show greater resilience to variations in edge density\""}},
                       {C::sparse, {R::strong, "no sparse penalty observed"}},
                       {C::large_p, {R::robust, s512 + "\"highlighting VARLiNGAM's exceptional scalability\""}},
                       {C::non_gaussian, {R::robust, s512 + "\"VARLiNGAM is the preferred method\""}},
                       {C::heterogeneous, {R::limited, "single regime"}},
                       {C::missing_tolerant, {R::limited, "imputation erodes non-Gaussianity"}},
                       {C::discrete_mix, {R::poor, "continuous only"}}},
                      {{"lag", 3}}));
    auto rows = embedded_benchmark_rows();
    for (auto& e : r) e.benchmark_rows = rows[e.id];
    return r;
}

}  // namespace

const Registry& default_registry() {
    static const Registry registry = build_registry();
    return registry;
}

const AlgorithmEntry& find_entry(const Registry& registry, const std::string& id) {
    for (const auto& e : registry)
        if (e.id == id) return e;
    throw Error(ErrorCode::UnknownAlgorithm, "unknown algorithm '" + id + "'");
}

// ---- filter -------------------------------------------------------------

std::optional<double> predicted_runtime(const AlgorithmEntry& e, const DatasetProfile& p) {
    const BenchmarkRow* row = nearest_row(e, fingerprint(p));
    if (!row) return std::nullopt;
    double pr = static_cast<double>(p.n_vars) / std::max(1.0, row->fingerprint.n_vars);
    return row->mean_runtime * (static_cast<double>(p.n_samples) / std::max(1.0, row->fingerprint.n_samples)) * pr * pr;
}

std::vector<std::string> violations(const AlgorithmEntry& e, const DatasetProfile& p) {
    std::vector<std::string> v;
    if (e.data_kind != p.data_kind) v.push_back("needs " + to_string(e.data_kind) + " data");
    if (p.n_vars > e.max_vars) v.push_back("scales to " + std::to_string(e.max_vars) + " variables");
    if (e.requires_continuous && p.discrete_ratio > 0.0) v.push_back("continuous columns only");
    if (e.requires_non_gaussian && p.gaussian_noise == NoiseVerdict::gaussian) v.push_back("requires non-Gaussian noise");
    if (auto t = predicted_runtime(e, p); t && *t > p.runtime_budget_seconds)
        v.push_back("predicted runtime " + std::to_string(static_cast<long long>(std::ceil(*t))) + " s over budget");
    return v;
}

FilterResult filter_algorithms(const DatasetProfile& profile, const Registry& registry) {
    if (registry.empty()) throw Error(ErrorCode::InvalidArgument, "empty registry");
    FilterResult res;
    const AlgorithmEntry* least = nullptr;
    std::size_t least_count = std::numeric_limits<std::size_t>::max();
    for (const auto& e : registry) {
        auto v = violations(e, profile);
        if (v.empty()) {
            res.candidates.push_back(e.id);
        } else {
            res.excluded.push_back({e.id, join(v, "; ")});
            if (v.size() < least_count) least_count = v.size(), least = &e;
        }
    }
    if (res.candidates.empty()) {
        res.candidates.push_back(least->id);
        res.excluded.erase(std::find_if(res.excluded.begin(), res.excluded.end(),
                                        [&](const Exclusion& x) { return x.id == least->id; }));
        res.warnings.push_back("every algorithm violates a hard requirement; keeping " + least->id +
                               " as the least-violating entry");
    }
    return res;
}

// ---- rank ---------------------------------------------------------------

std::vector<RankedCandidate> rank_algorithms(const std::vector<std::string>& candidates, const DatasetProfile& profile,
                                             const Registry& registry, double theory_weight) {
    const std::vector<Condition> active = active_conditions(profile);
    const Fingerprint f = fingerprint(profile);
    std::vector<RankedCandidate> out;
    for (const auto& id : candidates) {
        const AlgorithmEntry& e = find_entry(registry, id);
        RankedCandidate c;
        c.id = id;
        for (Condition cond : active) {
            auto it = e.ratings.find(cond);
            c.theoretical += static_cast<double>(it == e.ratings.end() ? Rating::moderate : it->second.rating);
        }
        const BenchmarkRow* row = nearest_row(e, f);
        c.empirical = row ? row->mean_f1 : 0.0;
        out.push_back(c);
    }
    auto normalize = [&](auto field) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& c : out) lo = std::min(lo, c.*field), hi = std::max(hi, c.*field);
        std::vector<double> v;
        for (const auto& c : out) v.push_back(hi > lo ? (c.*field - lo) / (hi - lo) : 1.0);
        return v;
    };
    std::vector<double> nt = normalize(&RankedCandidate::theoretical);
    std::vector<double> ne = normalize(&RankedCandidate::empirical);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].score = theory_weight * nt[k] + (1.0 - theory_weight) * ne[k];
    std::sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return out;
}

// ---- configure ----------------------------------------------------------

Configured configure_hyperparameters(const std::string& id, const DatasetProfile& p) {
    const AlgorithmEntry& e = find_entry(default_registry(), id);
    Configured c;
    c.config = e.default_config;
    auto ci_rules = [&] {
        if (p.n_samples > 5000) {
            c.config["alpha"] = 0.01;
            c.rationale.push_back("alpha 0.01: n = " + std::to_string(p.n_samples) + " > 5000, tests are highly powered");
        } else {
            c.config["alpha"] = 0.05;
            c.rationale.push_back("alpha 0.05: default significance level");
        }
        if (p.discrete_ratio >= 1.0) {
            c.config["test"] = "chi_squared";
            c.rationale.push_back("test chi_squared: every column is discrete");
        } else if (p.linearity == Linearity::nonlinear) {
            c.config["test"] = "rank_fisher_z";
            c.rationale.push_back("test rank_fisher_z: profile reports nonlinear relations");
        } else {
            c.config["test"] = "fisher_z";
            c.rationale.push_back("test fisher_z: continuous data without evidence of nonlinearity");
        }
    };
    if (id == "pc" || id == "iamb") {
        ci_rules();
    } else if (id == "notears_linear") {
        if (p.dense.value_or(false)) {
            c.config["lambda1"] = 0.05;
            c.rationale.push_back("lambda1 0.05: halved because the profile suggests a dense graph");
        } else {
            c.rationale.push_back("lambda1 0.1: default sparsity penalty");
        }
    } else if (e.data_kind == DataKind::time_series) {
        int lag = std::clamp(p.suggested_lag.value_or(3), 1, 20);
        c.config["lag"] = lag;
        c.rationale.push_back("lag " + std::to_string(lag) +
                              (p.suggested_lag ? ": VAR-BIC suggestion clamped to [1, 20]" : ": no lag estimate, default 3"));
    } else {
        c.rationale.push_back(id + ": default configuration");
    }
    return c;
}

// ---- trace --------------------------------------------------------------

nlohmann::json to_json(const SelectionTrace& t) {
    nlohmann::json filtered = nlohmann::json::array(), ranked = nlohmann::json::array();
    for (const auto& x : t.filtered_out) filtered.push_back({{"id", x.id}, {"reason", x.reason}});
    for (const auto& r : t.ranked)
        ranked.push_back({{"id", r.id}, {"theoretical", r.theoretical}, {"empirical", r.empirical}, {"score", r.score}});
    return {{"filtered_out", filtered}, {"ranked", ranked},           {"chosen", t.chosen},
            {"config", t.config},       {"rationale", t.rationale}, {"warnings", t.warnings}};
}

SelectionTrace selection_trace_from_json(const nlohmann::json& j) {
    SelectionTrace t;
    for (const auto& x : j.at("filtered_out")) t.filtered_out.push_back({x.at("id"), x.at("reason")});
    for (const auto& r : j.at("ranked")) t.ranked.push_back({r.at("id"), r.at("theoretical"), r.at("empirical"), r.at("score")});
    t.chosen = j.at("chosen");
    t.config = j.value("config", nlohmann::json::object());
    t.rationale = j.value("rationale", std::vector<std::string>{});
    t.warnings = j.value("warnings", std::vector<std::string>{});
    return t;
}

namespace {

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

SelectionTrace select_algorithm(const DatasetProfile& profile, const Registry& registry, double theory_weight) {
    SelectionTrace t;
    FilterResult f = filter_algorithms(profile, registry);
    t.filtered_out = f.excluded;
    t.warnings = f.warnings;
    t.ranked = rank_algorithms(f.candidates, profile, registry, theory_weight);
    t.chosen = t.ranked.front().id;

    std::vector<std::string> active;
    for (Condition c : active_conditions(profile)) active.push_back(to_string(c));
    t.rationale.push_back("active conditions: " + (active.empty() ? std::string("none") : join(active, ", ")));
    for (const auto& x : t.filtered_out) t.rationale.push_back("excluded " + x.id + ": " + x.reason);
    for (const auto& r : t.ranked)
        t.rationale.push_back("ranked " + r.id + ": theoretical " + fmt3(r.theoretical) + ", empirical F1 " +
                              fmt3(r.empirical) + ", blended " + fmt3(r.score));
    const AlgorithmEntry& chosen = find_entry(registry, t.chosen);
    for (Condition cond : active_conditions(profile)) {
        auto it = chosen.ratings.find(cond);
        if (it == chosen.ratings.end()) continue;
        t.rationale.push_back(t.chosen + " on " + to_string(cond) + ": " + to_string(it->second.rating) + " (" +
                              it->second.citation + ")");
    }
    t.rationale.push_back("chosen " + t.chosen);
    Configured c = configure_hyperparameters(t.chosen, profile);
    t.config = c.config;
    for (auto& line : c.rationale) t.rationale.push_back(line);
    return t;
}

SelectionTrace switch_choice(const SelectionTrace& trace, const std::string& id, const DatasetProfile& profile,
                             const std::string& reason) {
    bool ranked = std::any_of(trace.ranked.begin(), trace.ranked.end(), [&](const RankedCandidate& r) { return r.id == id; });
    if (!ranked) throw Error(ErrorCode::InvalidArgument, "'" + id + "' is not a ranked candidate");
    SelectionTrace t = trace;
    t.chosen = id;
    t.rationale.push_back("switched to " + id + ": " + reason);
    Configured c = configure_hyperparameters(id, profile);
    t.config = c.config;
    for (auto& line : c.rationale) t.rationale.push_back(line);
    return t;
}

namespace {

struct Endpoint {
    std::string host_port;
    std::string path;
};

std::optional<Endpoint> split_endpoint(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) return std::nullopt;
    std::string rest = url.substr(scheme.size());
    auto slash = rest.find('/');
    Endpoint e;
    e.host_port = scheme + rest.substr(0, slash);
    e.path = slash == std::string::npos ? "/" : rest.substr(slash);
    return e;
}

}  // namespace

SelectionTrace advisor_rerank(const SelectionTrace& trace, const DatasetProfile& profile,
                              const std::optional<std::string>& endpoint, const Registry& registry) {
    if (!endpoint || endpoint->empty()) return trace;
    SelectionTrace out = trace;
    auto warn = [&](const std::string& msg) {
        out.warnings.push_back("advisor: " + msg + "; keeping " + trace.chosen);
        return out;
    };
    auto ep = split_endpoint(*endpoint);
    if (!ep) return warn("endpoint must look like http://host:port/path");

    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& r : trace.ranked) {
        nlohmann::json ratings = nlohmann::json::object();
        for (const auto& [cond, cell] : find_entry(registry, r.id).ratings) ratings[to_string(cond)] = to_string(cell.rating);
        candidates.push_back({{"id", r.id},
                              {"scores", {{"theoretical", r.theoretical}, {"empirical", r.empirical}, {"score", r.score}}},
                              {"ratings", ratings}});
    }
    nlohmann::json request = {{"profile", to_json(profile)}, {"candidates", candidates}, {"trace", to_json(trace)}};

    httplib::Client client(ep->host_port);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(5, 0);
    client.set_write_timeout(5, 0);
    auto res = client.Post(ep->path, request.dump(), "application/json");
    if (!res) return warn("request failed (" + httplib::to_string(res.error()) + ")");
    if (res->status != 200) return warn("HTTP status " + std::to_string(res->status));
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.is_object() || !reply.contains("chosen") || !reply["chosen"].is_string())
        return warn("malformed response");
    std::string chosen = reply["chosen"];
    std::string why = reply.contains("rationale") && reply["rationale"].is_string() ? reply["rationale"].get<std::string>() : "";
    bool ranked = std::any_of(trace.ranked.begin(), trace.ranked.end(), [&](const RankedCandidate& r) { return r.id == chosen; });
    if (!ranked) return warn("proposed '" + chosen + "', which is not a candidate");
    if (chosen == trace.chosen) {
        out.rationale.push_back("advisor agrees with " + chosen + (why.empty() ? "" : ": " + why));
        return out;
    }
    return switch_choice(trace, chosen, profile, "advisor suggestion" + (why.empty() ? "" : ": " + why));
}

std::map<std::string, std::vector<BenchmarkRow>> measure_benchmark_rows(const ScenarioSuite& suite,
                                                                        const std::vector<std::string>& algorithms,
                                                                        std::uint64_t seed_offset) {
    BenchOptions opt;
    opt.seed_offset = seed_offset;
    std::vector<RunRecord> records = run_benchmark(suite, algorithms, opt);
    std::vector<AggregateRow> rows = aggregate(records);

    std::map<std::string, Fingerprint> prints;
    for (const auto& sc : suite.scenarios) {
        Fingerprint acc;
        acc.linear = acc.gaussian = 0.0;
        double density = 0.0;
        int density_count = 0;
        for (int s = 0; s < suite.seeds; ++s) {
            BenchInstance inst = make_instance(sc.config, seed_offset + static_cast<std::uint64_t>(s));
            ProfileHints hints;
            hints.data_kind = std::holds_alternative<TsScenario>(sc.config) ? DataKind::time_series : DataKind::tabular;
            Fingerprint f = fingerprint(profile_dataset(inst.data, hints, seed_offset + static_cast<std::uint64_t>(s)));
            acc.n_samples += f.n_samples;
            acc.n_vars += f.n_vars;
            acc.linear += f.linear;
            acc.gaussian += f.gaussian;
            if (f.density) density += *f.density, ++density_count;
        }
        double k = suite.seeds;
        acc.n_samples /= k, acc.n_vars /= k, acc.linear /= k, acc.gaussian /= k;
        if (density_count > 0) acc.density = density / density_count;
        prints[sc.id] = acc;
    }
    std::map<std::string, std::vector<BenchmarkRow>> out;
    for (const auto& r : rows) {
        if (!r.mean_f1) continue;
        out[r.algorithm].push_back({suite.name + "/" + r.scenario, prints[r.scenario], *r.mean_f1, r.mean_runtime});
    }
    return out;
}

}  // namespace causal_atlas
