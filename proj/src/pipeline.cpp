#include <cstdio>

#include "causal_atlas/error.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/pipeline.hpp"
#include "causal_atlas/text.hpp"
#include "causal_atlas/version.hpp"

namespace causal_atlas {

std::string to_string(Phase p) {
    switch (p) {
        case Phase::pending: return "pending";
        case Phase::profiling: return "profiling";
        case Phase::selecting: return "selecting";
        case Phase::discovering: return "discovering";
        case Phase::bootstrapping: return "bootstrapping";
        case Phase::awaiting_review: return "awaiting_review";
        case Phase::done: return "done";
        case Phase::failed: return "failed";
    }
    return "pending";
}

Phase parse_phase(const std::string& s) {
    for (Phase p : {Phase::pending, Phase::profiling, Phase::selecting, Phase::discovering, Phase::bootstrapping,
                    Phase::awaiting_review, Phase::done, Phase::failed})
        if (to_string(p) == s) return p;
    throw Error(ErrorCode::InvalidArgument, "unknown phase '" + s + "'");
}

Dataset prepare_dataset(const Dataset& data, std::vector<std::string>& dropped, std::vector<std::string>& notes) {
    if (data.n_samples() == 0 || data.n_columns() == 0) throw Error(ErrorCode::EmptyDataset, "dataset has no rows or columns");
    Dataset out = data;
    if (!data.is_time_series()) {
        out = infer_schema(data).data;
        int discrete = 0;
        for (const auto& c : out.columns()) discrete += c.kind == ColumnKind::discrete;
        if (discrete > 0) notes.push_back(std::to_string(discrete) + " column(s) typed as discrete");
    }
    if (out.has_missing()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * out.missing_rate());
        notes.push_back(std::string("imputed ") + buf + " missing cells (mean for continuous, mode for discrete columns)");
        out = impute(out, ImputeStrategy::mean_mode);
    }
    DropConstantResult dc = drop_constant(out);
    for (const auto& name : dc.removed) notes.push_back("dropped constant column " + name);
    dropped = dc.removed;
    return dc.data;
}

namespace {

void notify(const PipelineOptions& o, Phase p, const PipelineResult& r) {
    if (o.on_phase) o.on_phase(p, r);
}

SelectionTrace fixed_selection(const std::string& id, const DatasetProfile& profile) {
    algorithm_info(id);
    SelectionTrace t;
    t.chosen = id;
    t.ranked.push_back({id, 0.0, 0.0, 1.0});
    t.rationale.push_back("algorithm fixed by the caller: " + id);
    for (const auto& v : violations(find_entry(default_registry(), id), profile))
        t.warnings.push_back(id + " violates a hard requirement: " + v);
    Configured c = configure_hyperparameters(id, profile);
    t.config = c.config;
    for (auto& line : c.rationale) t.rationale.push_back(line);
    return t;
}

void apply_overrides(SelectionTrace& t, const nlohmann::json& overrides) {
    if (!overrides.is_object()) return;
    for (const auto& [k, v] : overrides.items()) {
        t.config[k] = v;
        t.rationale.push_back("config override: " + k + " = " + v.dump());
    }
}

/// Runs the chosen algorithm, walking down the ranking on failure.
AlgorithmOutput discover(const Dataset& data, SelectionTrace& trace, const DatasetProfile& profile, bool allow_fallback,
                         const CancelToken& cancel) {
    while (true) {
        try {
            return run_algorithm(trace.chosen, data, trace.config, cancel);
        } catch (const Error& e) {
            if (!allow_fallback || e.code() == ErrorCode::Cancelled) throw;
            auto it = std::find_if(trace.ranked.begin(), trace.ranked.end(),
                                   [&](const RankedCandidate& r) { return r.id == trace.chosen; });
            if (it == trace.ranked.end() || std::next(it) == trace.ranked.end()) throw;
            std::string failed = trace.chosen;
            trace.warnings.push_back(failed + " failed: " + e.what());
            trace = switch_choice(trace, std::next(it)->id, profile, "fallback after " + failed + " failed (" + e.what() + ")");
        }
    }
}

void finish(const Dataset& data, PipelineResult& r, const PipelineOptions& o, bool allow_fallback, const CancelToken& cancel) {
    notify(o, Phase::discovering, r);
    r.output = discover(data, r.trace, r.profile, allow_fallback, cancel);
    for (const auto& w : r.output.warnings) r.warnings.push_back(r.output.algorithm + ": " + w);
    const bool tabular = r.profile.data_kind == DataKind::tabular;
    r.discovered = tabular ? representative_graph(r.output, o.seed) : r.output.directed;

    notify(o, Phase::bootstrapping, r);
    r.bootstrap = o.bootstrap;
    r.confidence = bootstrap_edge_frequencies(data, r.trace.chosen, r.trace.config, o.bootstrap, o.seed, o.parallelism, cancel);
    for (const auto& s : r.confidence.skipped) r.warnings.push_back("bootstrap " + s);

    r.constraints = merge_constraints(o.constraints);
    BoolMatrix g = r.discovered;
    EdgeConfidence conf = r.confidence;
    if (!r.constraints.empty()) {
        g = apply_constraints(g, r.constraints, r.labels, conf.frequency, tabular);
        conf = constrain_confidence(conf, r.constraints, r.labels);
    }
    r.refined = refine_graph(g, conf, o.hi, o.lo, tabular);
    if (!r.constraints.empty()) r.refined.graph = apply_constraints(r.refined.graph, r.constraints, r.labels, conf.frequency, tabular);
    r.hi = o.hi;
    r.lo = o.lo;
    if (o.truth) {
        if (o.truth->rows() != r.refined.graph.rows())
            throw Error(ErrorCode::DimensionMismatch, "reference graph size differs from the analysed columns");
        r.metrics = structural_metrics(r.refined.graph, *o.truth);
    }
}

}  // namespace

PipelineResult run_pipeline(const Dataset& raw, const PipelineOptions& o, const CancelToken& cancel) {
    PipelineResult r;
    r.seed = o.seed;
    r.timestamp = o.timestamp;
    notify(o, Phase::profiling, r);
    std::vector<std::string> notes;
    Dataset data = prepare_dataset(raw, r.dropped_columns, notes);
    r.labels = data.names();
    r.profile = profile_dataset(data, o.hints, o.seed);
    r.profile.missing_rate = raw.missing_rate();
    r.profile.notes.insert(r.profile.notes.begin(), notes.begin(), notes.end());
    cancel.check();

    notify(o, Phase::selecting, r);
    if (o.algorithm) {
        r.trace = fixed_selection(*o.algorithm, r.profile);
    } else {
        r.trace = select_algorithm(r.profile);
        r.trace = advisor_rerank(r.trace, r.profile, o.advisor_endpoint);
    }
    apply_overrides(r.trace, o.config);
    cancel.check();
    finish(data, r, o, !o.algorithm, cancel);
    return r;
}

PipelineResult rerun_with_constraints(const Dataset& raw, const PipelineResult& previous, const std::vector<ConstraintSet>& history,
                                      const PipelineOptions& options, const CancelToken& cancel) {
    PipelineOptions o = options;
    o.constraints = history;
    o.seed = previous.seed;
    o.timestamp = previous.timestamp;
    o.bootstrap = previous.bootstrap;
    o.hi = previous.hi;
    o.lo = previous.lo;
    // validate before any work so a bad set leaves the caller's state alone
    resolve_constraints(merge_constraints(history), previous.labels, previous.profile.data_kind == DataKind::tabular);
    PipelineResult r;
    r.seed = previous.seed;
    r.timestamp = previous.timestamp;
    r.labels = previous.labels;
    r.dropped_columns = previous.dropped_columns;
    r.profile = previous.profile;
    r.trace = previous.trace;
    std::vector<std::string> dropped, notes;
    Dataset data = prepare_dataset(raw, dropped, notes);
    finish(data, r, o, false, cancel);
    return r;
}

// ---- output -------------------------------------------------------------

namespace {

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct EdgeRow {
    std::string from, to;
    double confidence;
};

std::vector<EdgeRow> edge_rows(const PipelineResult& r) {
    std::vector<EdgeRow> rows;
    const BoolMatrix& g = r.graph();
    for (Index i = 0; i < g.rows(); ++i)
        for (Index j = 0; j < g.cols(); ++j)
            if (g(i, j)) rows.push_back({r.labels[static_cast<std::size_t>(i)], r.labels[static_cast<std::size_t>(j)], r.confidence.frequency(i, j)});
    return rows;
}


nlohmann::json metrics_json(const EdgeMetrics& m) {
    return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"shd", m.shd}};
}

nlohmann::json report_json(const PipelineResult& r) {
    nlohmann::json edges = nlohmann::json::array(), uncertain = nlohmann::json::array();
    for (const auto& e : edge_rows(r)) edges.push_back({{"from", e.from}, {"to", e.to}, {"confidence", e.confidence}});
    for (const auto& u : r.refined.uncertain)
        uncertain.push_back({{"from", r.labels[static_cast<std::size_t>(u.from)]},
                             {"to", r.labels[static_cast<std::size_t>(u.to)]},
                             {"frequency", u.frequency},
                             {"present", u.present}});
    nlohmann::json j = {
        {"meta", {{"title", "Causal analysis report"}, {"timestamp", r.timestamp}, {"version", kVersion}}},
        {"profile", to_json(r.profile)},
        {"dropped_columns", r.dropped_columns},
        {"selection", to_json(r.trace)},
        {"graph", {{"nodes", r.labels}, {"edges", edges}}},
        {"uncertain", uncertain},
        {"refinement_log", r.refined.log},
        {"constraints", to_json(r.constraints)},
        {"confidence", to_json(r.confidence)},
        {"metrics", r.metrics ? metrics_json(*r.metrics) : nlohmann::json(nullptr)},
        {"warnings", r.warnings},
        {"reproduction",
         {{"seed", r.seed}, {"bootstrap", r.bootstrap}, {"hi", r.hi}, {"lo", r.lo}, {"algorithm", r.trace.chosen}, {"config", r.trace.config}}},
    };
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

nlohmann::json graph_json(const PipelineResult& r) {
    nlohmann::json j = report_json(r);
    return {{"nodes", r.labels},       {"edges", j["graph"]["edges"]}, {"uncertain", j["uncertain"]},
            {"algorithm", r.trace.chosen}, {"refinement_log", r.refined.log}};
}

std::string emit_pipeline_report(const PipelineResult& r, ReportFormat format) {
    if (format == ReportFormat::json) return report_json(r).dump(2) + "\n";
    if (format == ReportFormat::csv) {
        std::string out = "section,key,value,detail\n";
        auto row = [&](const std::string& section, const std::string& key, const std::string& value, const std::string& detail = "") {
            out += csv_field(section) + "," + csv_field(key) + "," + csv_field(value) + "," + csv_field(detail) + "\n";
        };
        row("meta", "timestamp", r.timestamp);
        row("meta", "version", kVersion);
        const nlohmann::json profile = to_json(r.profile);
        for (const auto& [k, v] : profile.items())
            if (k != "notes") row("profile", k, v.is_string() ? v.get<std::string>() : v.dump());
        for (const auto& x : r.trace.filtered_out) row("filtered_out", x.id, x.reason);
        for (const auto& c : r.trace.ranked)
            row("candidate", c.id, format_double(c.score),
                "theoretical=" + format_double(c.theoretical) + ";empirical=" + format_double(c.empirical));
        row("selection", "chosen", r.trace.chosen, r.trace.config.dump());
        for (const auto& line : r.trace.rationale) row("rationale", "", line);
        for (const auto& e : edge_rows(r)) row("edge", e.from + "->" + e.to, format_double(e.confidence));
        for (const auto& u : r.refined.uncertain)
            row("uncertain", r.labels[static_cast<std::size_t>(u.from)] + "->" + r.labels[static_cast<std::size_t>(u.to)],
                format_double(u.frequency), u.present ? "present" : "absent");
        for (const auto& line : r.refined.log) row("refinement", "", line);
        if (r.metrics) {
            const nlohmann::json m = metrics_json(*r.metrics);
            for (const auto& [k, v] : m.items()) row("metrics", k, v.dump());
        }
        for (const auto& w : r.warnings) row("warning", "", w);
        row("reproduction", "seed", std::to_string(r.seed));
        row("reproduction", "bootstrap", std::to_string(r.bootstrap), std::to_string(r.confidence.completed) + " completed");
        return out;
    }

    std::string out = "# Causal analysis report\n\n";
    out += "- generated: " + r.timestamp + "\n- version: " + std::string(kVersion) + "\n\n";

    out += "## Dataset\n\n| property | value |\n|---|---|\n";
    const DatasetProfile& p = r.profile;
    auto yes_no = [](const std::optional<bool>& b) { return b ? std::string(*b ? "yes" : "no") : std::string(kNotAvailable); };
    out += "| samples | " + std::to_string(p.n_samples) + " |\n";
    out += "| variables | " + std::to_string(p.n_vars) + " |\n";
    out += "| data kind | " + to_string(p.data_kind) + " |\n";
    out += "| discrete ratio | " + fixed3(p.discrete_ratio) + " |\n";
    out += "| missing rate | " + fixed3(p.missing_rate) + " |\n";
    out += "| linearity | " + to_string(p.linearity) + " |\n";
    out += "| noise | " + to_string(p.gaussian_noise) + " |\n";
    out += "| heterogeneous | " + yes_no(p.heterogeneous) + " |\n";
    out += "| stationary | " + yes_no(p.stationary) + " |\n";
    out += "| suggested lag | " + (p.suggested_lag ? std::to_string(*p.suggested_lag) : std::string(kNotAvailable)) + " |\n";
    out += "| density estimate | " + (p.density ? fixed3(*p.density) : std::string(kNotAvailable)) + " |\n";
    out += "| dense | " + yes_no(p.dense) + " |\n";
    if (!p.notes.empty()) {
        out += "\n";
        for (const auto& n : p.notes) out += "- " + n + "\n";
    }

    out += "\n## Algorithm selection\n\n";
    out += "Chosen: **" + r.trace.chosen + "** with configuration `" + r.trace.config.dump() + "`.\n\n";
    out += "| candidate | theoretical | empirical F1 | score |\n|---|---|---|---|\n";
    for (const auto& c : r.trace.ranked)
        out += "| " + c.id + " | " + fixed3(c.theoretical) + " | " + fixed3(c.empirical) + " | " + fixed3(c.score) + " |\n";
    if (!r.trace.filtered_out.empty()) {
        out += "\nFiltered out:\n\n";
        for (const auto& x : r.trace.filtered_out) out += "- " + x.id + ": " + x.reason + "\n";
    }
    out += "\nRationale:\n\n";
    for (const auto& line : r.trace.rationale) out += "- " + line + "\n";

    out += "\n## Causal graph\n\n";
    auto rows = edge_rows(r);
    if (rows.empty()) {
        out += "No edges.\n";
    } else {
        out += "| cause | effect | bootstrap confidence |\n|---|---|---|\n";
        for (const auto& e : rows) out += "| " + e.from + " | " + e.to + " | " + fixed3(e.confidence) + " |\n";
    }
    if (!r.refined.uncertain.empty()) {
        out += "\nUncertain edges (" + fixed3(r.lo) + " < confidence < " + fixed3(r.hi) + "):\n\n";
        out += "| cause | effect | confidence | in graph |\n|---|---|---|---|\n";
        for (const auto& u : r.refined.uncertain)
            out += "| " + r.labels[static_cast<std::size_t>(u.from)] + " | " + r.labels[static_cast<std::size_t>(u.to)] + " | " +
                   fixed3(u.frequency) + " | " + (u.present ? "yes" : "no") + " |\n";
    }
    if (!r.refined.log.empty()) {
        out += "\nRefinement:\n\n";
        for (const auto& line : r.refined.log) out += "- " + line + "\n";
    }
    if (!r.constraints.empty()) {
        out += "\n## Constraints\n\n";
        for (const auto& [a, b] : r.constraints.required) out += "- required " + a + " -> " + b + "\n";
        for (const auto& [a, b] : r.constraints.forbidden) out += "- forbidden " + a + " -> " + b + "\n";
        for (const auto& v : r.constraints.forbidden_as_effect) out += "- " + v + " cannot be an effect\n";
    }
    if (r.metrics) {
        const EdgeMetrics& m = *r.metrics;
        out += "\n## Metrics\n\n| F1 | precision | recall | SHD |\n|---|---|---|---|\n";
        out += "| " + fixed3(m.f1) + " | " + fixed3(m.precision) + " | " + fixed3(m.recall) + " | " + std::to_string(m.shd) + " |\n";
    }
    if (!r.warnings.empty() || !r.trace.warnings.empty()) {
        out += "\n## Warnings\n\n";
        for (const auto& w : r.trace.warnings) out += "- " + w + "\n";
        for (const auto& w : r.warnings) out += "- " + w + "\n";
    }
    out += "\n## Reproduction\n\n";
    out += "- seed: " + std::to_string(r.seed) + "\n";
    out += "- bootstrap replicates: " + std::to_string(r.bootstrap) + " (" + std::to_string(r.confidence.completed) + " completed)\n";
    out += "- thresholds: lo " + fixed3(r.lo) + ", hi " + fixed3(r.hi) + "\n";
    out += "- algorithm: " + r.trace.chosen + " " + r.trace.config.dump() + "\n";
    if (!r.dropped_columns.empty()) out += "- dropped columns: " + join(r.dropped_columns, ", ") + "\n";
    return out;
}

}  // namespace causal_atlas
