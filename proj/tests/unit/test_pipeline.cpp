#include <doctest.h>

#include "causal_atlas/error.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/pipeline.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/simulate.hpp"

using namespace causal_atlas;

namespace {

Dataset chain4(Index n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> z;
    MatrixXd v(n, 4);
    for (Index r = 0; r < n; ++r) {
        v(r, 0) = z(rng);
        v(r, 1) = 0.9 * v(r, 0) + z(rng);
        v(r, 2) = -0.8 * v(r, 1) + z(rng);
        v(r, 3) = 0.7 * v(r, 2) + z(rng);
    }
    return Dataset(v, {{"A"}, {"B"}, {"C"}, {"D"}});
}

PipelineOptions quick(std::uint64_t seed) {
    PipelineOptions o;
    o.seed = seed;
    o.bootstrap = 5;
    return o;
}

}  // namespace

TEST_CASE("pipeline on a tabular dataset walks every phase") {
    TabularScenario sc;
    sc.n_nodes = 5;
    sc.n_samples = 500;
    sc.seed = 3;
    TabularSample s = simulate_tabular(sc);
    std::vector<Phase> phases;
    PipelineOptions o = quick(7);
    o.on_phase = [&](Phase p, const PipelineResult& partial) {
        phases.push_back(p);
        if (p == Phase::selecting) CHECK(partial.profile.n_vars == 5);
        if (p == Phase::discovering) CHECK_FALSE(partial.trace.chosen.empty());
    };
    o.truth = s.truth.edges();
    PipelineResult r = run_pipeline(s.data, o);
    CHECK(phases == std::vector<Phase>{Phase::profiling, Phase::selecting, Phase::discovering, Phase::bootstrapping});
    CHECK(is_acyclic(r.graph()));
    CHECK(r.confidence.b_samples == 5);
    REQUIRE(r.metrics);
    CHECK(r.metrics->f1 >= 0.0);
    CHECK_FALSE(r.trace.chosen.empty());
    CHECK(std::none_of(r.trace.filtered_out.begin(), r.trace.filtered_out.end(),
                       [&](const Exclusion& x) { return x.id == r.trace.chosen; }));
}

TEST_CASE("pipeline reports are byte-identical across runs and carry the rationale") {
    Dataset d = chain4(400, 12);
    PipelineResult a = run_pipeline(d, quick(9));
    PipelineResult b = run_pipeline(d, quick(9));
    for (ReportFormat f : {ReportFormat::markdown, ReportFormat::json, ReportFormat::csv}) {
        std::string ra = emit_pipeline_report(a, f);
        CHECK(ra == emit_pipeline_report(b, f));
        CHECK(ra.find("/root") == std::string::npos);
    }
    std::string md = emit_pipeline_report(a, ReportFormat::markdown);
    for (const auto& line : a.trace.rationale) CHECK(md.find(line) != std::string::npos);
    for (const char* section : {"## Dataset", "## Algorithm selection", "## Causal graph", "## Reproduction"})
        CHECK(md.find(section) != std::string::npos);
    nlohmann::json j = nlohmann::json::parse(emit_pipeline_report(a, ReportFormat::json));
    CHECK(j["selection"]["chosen"] == a.trace.chosen);
    CHECK(j["meta"]["timestamp"] == "1970-01-01T00:00:00Z");
    CHECK(static_cast<int>(j["graph"]["edges"].size()) == a.graph().count());
}

TEST_CASE("fixed algorithm and config overrides") {
    Dataset d = chain4(400, 2);
    PipelineOptions o = quick(1);
    o.algorithm = "pc";
    o.config = {{"alpha", 0.01}};
    PipelineResult r = run_pipeline(d, o);
    CHECK(r.trace.chosen == "pc");
    CHECK(r.trace.config["alpha"] == 0.01);
    CHECK(r.trace.rationale.back() == "config override: alpha = 0.01");
    o.config = {{"nonsense", 1}};
    CHECK_THROWS_AS(run_pipeline(d, o), Error);
    o.algorithm = "no_such_algorithm";
    CHECK_THROWS_AS(run_pipeline(d, o), Error);
}

TEST_CASE("missing cells are imputed and constant columns dropped") {
    Dataset d = chain4(300, 4);
    MatrixXd v = d.values();
    v(3, 1) = std::numeric_limits<double>::quiet_NaN();
    MatrixXd wide(v.rows(), 5);
    wide << v, VectorXd::Constant(v.rows(), 2.0);
    Dataset dirty(wide, {{"A"}, {"B"}, {"C"}, {"D"}, {"K"}});
    PipelineOptions o = quick(2);
    o.algorithm = "notears_linear";
    PipelineResult r = run_pipeline(dirty, o);
    CHECK(r.labels == std::vector<std::string>{"A", "B", "C", "D"});
    CHECK(r.dropped_columns == std::vector<std::string>{"K"});
    CHECK(r.profile.missing_rate > 0.0);
    CHECK(std::any_of(r.profile.notes.begin(), r.profile.notes.end(),
                      [](const std::string& n) { return n.rfind("imputed", 0) == 0; }));
}

TEST_CASE("sequential constraint submissions honour their union") {
    Dataset d = chain4(1000, 5);
    PipelineOptions o = quick(3);
    o.algorithm = "notears_linear";
    PipelineResult first = run_pipeline(d, o);
    CHECK((first.graph()(0, 1) || first.graph()(1, 0)));

    ConstraintSet forbid_ab;
    forbid_ab.forbidden = {{"A", "B"}, {"B", "A"}};
    std::vector<ConstraintSet> history{forbid_ab};
    PipelineResult second = rerun_with_constraints(d, first, history);
    CHECK_FALSE(second.graph()(0, 1));
    CHECK_FALSE(second.graph()(1, 0));

    ConstraintSet more;
    more.required = {{"A", "D"}};
    more.forbidden_as_effect = {"C"};
    history.push_back(more);
    PipelineResult third = rerun_with_constraints(d, second, history);
    CHECK_FALSE(third.graph()(0, 1));
    CHECK_FALSE(third.graph()(1, 0));
    CHECK(third.graph()(0, 3));
    CHECK(third.graph().col(2).count() == 0);
    CHECK(is_acyclic(third.graph()));
    CHECK(third.trace.chosen == first.trace.chosen);

    ConstraintSet bad;
    bad.required = {{"A", "B"}};
    bad.forbidden = {{"A", "B"}};
    CHECK_THROWS_AS(rerun_with_constraints(d, third, {bad}), Error);
}

TEST_CASE("time-series pipeline keeps the summary graph") {
    TsScenario sc;
    sc.n_nodes = 3;
    sc.n_steps = 400;
    sc.seed = 6;
    TsSample s = simulate_timeseries(sc);
    PipelineOptions o = quick(4);
    o.bootstrap = 3;
    PipelineResult r = run_pipeline(s.data, o);
    CHECK(r.profile.data_kind == DataKind::time_series);
    CHECK(algorithm_info(r.trace.chosen).data_kind == DataKind::time_series);
    CHECK(r.graph().rows() == 3);
}

TEST_CASE("phase names round trip") {
    for (Phase p : {Phase::pending, Phase::profiling, Phase::selecting, Phase::discovering, Phase::bootstrapping,
                    Phase::awaiting_review, Phase::done, Phase::failed})
        CHECK(parse_phase(to_string(p)) == p);
    CHECK_THROWS_AS(parse_phase("sleeping"), Error);
}
