// One line per criterion: "criterion N: PASS|FAIL (details, seconds)".
// Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/bench.hpp"
#include "causal_atlas/ci_tests.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/discovery.hpp"
#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/optimize.hpp"
#include "causal_atlas/pipeline.hpp"
#include "causal_atlas/postprocess.hpp"
#include "causal_atlas/selector.hpp"
#include "causal_atlas/simulate.hpp"
#include "causal_atlas/stats.hpp"
#include "causal_atlas/text.hpp"
#include "support/oracle_ci.hpp"
#include "support/oracles.hpp"

using namespace causal_atlas;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double mean_f1(const std::vector<RunRecord>& records, const std::string& algorithm, const std::string& scenario = "") {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : records)
        if (r.algorithm == algorithm && (scenario.empty() || r.scenario == scenario) && r.metrics) {
            sum += r.metrics->f1;
            ++n;
        }
    return n ? sum / n : 0.0;
}

bool all_ok(const std::vector<RunRecord>& records) {
    return std::all_of(records.begin(), records.end(), [](const RunRecord& r) { return r.status == RunStatus::ok; });
}

ScenarioSuite suite_of(std::string name, std::vector<BenchScenario> scenarios, int seeds) {
    return ScenarioSuite{std::move(name), std::move(scenarios), seeds, 600.0};
}

MatrixXd gaussian(Index n, Index p, Rng& rng) {
    MatrixXd x(n, p);
    for (Index j = 0; j < p; ++j) x.col(j) = sample_noise(NoiseKind::gaussian, 1.0, n, rng);
    return x;
}

bool same_bits(const MatrixXd& a, const MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// ---- 1 ------------------------------------------------------------------

Outcome oracle_exactness() {
    Rng rng = make_rng(2024);
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
        int p = 2 + static_cast<int>(uniform01(rng) * 7);
        Dag dag = erdos_renyi_dag(p, 0.3, 5000 + t);
        oracle::DsepTest test(dag.edges());
        Cpdag got = pc(test, 0.05);
        bool ok;
        if (p <= 6) {
            auto [d, u] = oracle::cpdag_by_enumeration(dag.edges());
            ok = got.directed() == d && got.undirected() == u;
        } else {
            ok = got == dag_to_cpdag(dag);
        }
        failures += !ok;
    }
    return {failures == 0, std::to_string(failures) + " failures over 200 DAGs"};
}

// ---- 2 ------------------------------------------------------------------

Outcome pc_anchor() {
    auto records = run_benchmark(suite_of("normal", {{"default", TabularScenario{}}}, 10), {"pc"});
    double f1 = mean_f1(records, "pc");
    return {all_ok(records) && f1 >= 0.80, "PC mean F1 " + fmt("%.3f", f1) + " (need >= 0.80)"};
}

// ---- 3 ------------------------------------------------------------------

Outcome notears_anchor() {
    TabularScenario dense;
    dense.edge_prob = 0.5;
    auto records = run_benchmark(suite_of("cont", {{"default", TabularScenario{}}, {"dense", dense}}, 10), {"notears_linear"});
    double f1 = mean_f1(records, "notears_linear", "default");
    double f1_dense = mean_f1(records, "notears_linear", "dense");
    return {all_ok(records) && f1 >= 0.85 && f1_dense >= 0.60,
            "mean F1 " + fmt("%.3f", f1) + " (need >= 0.85), dense " + fmt("%.3f", f1_dense) + " (need >= 0.60)"};
}

// ---- 4 ------------------------------------------------------------------

Outcome lingam_anchor() {
    TabularScenario uni;
    uni.noise = NoiseKind::uniform;
    uni.n_samples = 5000;
    auto records = run_benchmark(suite_of("ng", {{"uniform", uni}}, 10), {"direct_lingam"});
    double f1 = mean_f1(records, "direct_lingam");
    int chosen = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        BenchInstance inst = make_instance(TabularScenario{}, s);
        SelectionTrace t = select_algorithm(profile_dataset(inst.data, {}, s));
        chosen += t.chosen == "direct_lingam";
    }
    return {all_ok(records) && f1 >= 0.90 && chosen == 0,
            "uniform mean F1 " + fmt("%.3f", f1) + " (need >= 0.90); chosen on " + std::to_string(chosen) +
                "/10 Gaussian datasets (need 0)"};
}

// ---- 5 ------------------------------------------------------------------

Outcome timeseries_anchor() {
    TsScenario g;
    g.n_nodes = 5;
    g.max_lag = 3;
    g.n_steps = 2000;
    TsScenario u = g;
    u.noise = NoiseKind::uniform;
    auto t0 = std::chrono::steady_clock::now();
    auto dyn = run_benchmark(suite_of("ts", {{"gaussian", g}}, 5), {"dynotears"});
    double t_dyn = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto var = run_benchmark(suite_of("ts", {{"uniform", u}}, 5), {"var_lingam"});
    double t_var = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() - t_dyn;
    double f_dyn = mean_f1(dyn, "dynotears"), f_var = mean_f1(var, "var_lingam");
    return {all_ok(dyn) && all_ok(var) && f_dyn >= 0.85 && f_var >= 0.85 && t_dyn <= 180 && t_var <= 180,
            "dynotears " + fmt("%.3f", f_dyn) + " in " + fmt("%.1f", t_dyn) + " s, var_lingam " + fmt("%.3f", f_var) +
                " in " + fmt("%.1f", t_var) + " s (need >= 0.85, <= 180 s each)"};
}

// ---- 6 ------------------------------------------------------------------

Outcome closed_forms() {
    std::vector<std::string> bad;
    CiResult z = fisher_z_from_r(std::tanh(0.2), 103, 0);
    if (std::abs(z.statistic - 2.0) > 1e-9) bad.push_back("fisher z statistic");
    if (std::abs(z.p_value - 0.04550026389635842) > 1e-9) bad.push_back("fisher z p-value");
    // (RSS_r - RSS_f) / q / (RSS_f / d) with RSS 120 vs 100, q = 2, d = 100
    if (std::abs(granger_f_statistic(120.0, 100.0, 2, 100) - 10.0) > 1e-9) bad.push_back("granger F");
    MatrixXd w(2, 2);
    w << 0, 1, 1, 0;
    if (std::abs(notears_h(w) - (2 * std::cosh(1.0) - 2)) > 1e-9) bad.push_back("notears h");
    MatrixXd corr(3, 3);  // chain with unit weights and noise: covariance [[1,1,1],[1,2,2],[1,2,3]]
    corr << 1, 1 / std::sqrt(2.0), 1 / std::sqrt(3.0), 1 / std::sqrt(2.0), 1, 2 / std::sqrt(6.0), 1 / std::sqrt(3.0),
        2 / std::sqrt(6.0), 1;
    SufficientStats s{corr, 1000};
    if (std::abs(partial_correlation(s, 0, 2, {1})) > 1e-9) bad.push_back("partial correlation");
    return {bad.empty(), bad.empty() ? "all four closed forms within 1e-9" : "off: " + join(bad, ", ")};
}

// ---- 7 ------------------------------------------------------------------

Outcome gradient_checks() {
    Rng rng = make_rng(77);
    double worst_n = 0.0, worst_d = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int d = 5;
        MatrixXd x = gaussian(200, d, rng);
        NotearsObjective obj;
        obj.cov = covariance(x);
        obj.lambda1 = 0.1;
        obj.rho = std::pow(10.0, t % 4);
        obj.alpha = uniform01(rng);
        VectorXd v(2 * d * d);
        for (Index i = 0; i < v.size(); ++i) v(i) = 0.3 * uniform01(rng);
        for (int i = 0; i < d; ++i) v(i * d + i) = v(d * d + i * d + i) = 0;
        VectorXd g;
        obj(v, g);
        VectorXd fd = numeric_gradient(obj, v, 1e-6);
        worst_n = std::max(worst_n, (g - fd).norm() / fd.norm());
    }
    for (int t = 0; t < 20; ++t) {
        const Index p = 4, lag = 2, m = p + p * lag;
        MatrixXd y = gaussian(150, m, rng);
        DynotearsObjective obj;
        obj.gram = y.transpose() * y / 150.0;
        obj.p = p;
        obj.lag = lag;
        obj.lambda_w = 0.05;
        obj.lambda_a = 0.05;
        obj.rho = std::pow(10.0, t % 4);
        obj.alpha = uniform01(rng);
        VectorXd v(2 * p * p + 2 * p * lag * p);
        for (Index i = 0; i < v.size(); ++i) v(i) = 0.3 * uniform01(rng);
        for (Index i = 0; i < p; ++i) v(i * p + i) = v(p * p + i * p + i) = 0;
        VectorXd g;
        obj(v, g);
        VectorXd fd = numeric_gradient(obj, v, 1e-6);
        worst_d = std::max(worst_d, (g - fd).norm() / fd.norm());
    }
    return {worst_n <= 1e-5 && worst_d <= 1e-5,
            "worst relative error notears " + fmt("%.2e", worst_n) + ", dynotears " + fmt("%.2e", worst_d)};
}

// ---- 8 ------------------------------------------------------------------

Outcome selector_end_to_end() {
    const std::uint64_t offset = 300;
    const int seeds = 3;
    std::vector<BenchScenario> tab, ts;
    for (FunctionType f : {FunctionType::linear, FunctionType::mlp})
        for (NoiseKind nk : {NoiseKind::gaussian, NoiseKind::uniform})
            for (double ep : {0.22, 0.5}) {
                TabularScenario s;
                s.function_type = f;
                s.noise = nk;
                s.edge_prob = ep;
                tab.push_back({to_string(f) + "," + to_string(nk) + (ep > 0.3 ? ",dense" : ",sparse"), s});
            }
    for (NoiseKind nk : {NoiseKind::gaussian, NoiseKind::uniform})
        for (int p : {5, 10}) {
            TsScenario s;
            s.n_nodes = p;
            s.noise = nk;
            ts.push_back({"ts," + to_string(nk) + ",p=" + std::to_string(p), s});
        }
    const std::vector<std::string> tab_algs = {"pc", "score_search", "notears_linear", "direct_lingam", "iamb"};
    const std::vector<std::string> ts_algs = {"granger_pairwise", "granger_multivariate", "var_lingam", "dynotears"};
    BenchOptions opt;
    opt.seed_offset = offset;
    auto records = run_benchmark(suite_of("tab", tab, seeds), tab_algs, opt);
    auto ts_records = run_benchmark(suite_of("ts", ts, seeds), ts_algs, opt);
    records.insert(records.end(), ts_records.begin(), ts_records.end());

    int hits = 0, violations_seen = 0, total = 0;
    std::vector<std::string> misses;
    auto judge = [&](const BenchScenario& sc, const std::vector<std::string>& algs, DataKind kind) {
        double best = 0.0;
        std::string best_id;
        for (const auto& a : algs) {
            double f = mean_f1(records, a, sc.id);
            if (f > best) best = f, best_id = a;
        }
        double sum = 0.0;
        std::map<std::string, int> picks;
        for (int s = 0; s < seeds; ++s) {
            BenchInstance inst = make_instance(sc.config, offset + static_cast<std::uint64_t>(s));
            ProfileHints hints;
            hints.data_kind = kind;
            DatasetProfile prof = profile_dataset(inst.data, hints, offset + static_cast<std::uint64_t>(s));
            SelectionTrace t = select_algorithm(prof);
            ++picks[t.chosen];
            if (!violations(find_entry(default_registry(), t.chosen), prof).empty()) ++violations_seen;
            AlgorithmOutput out = run_algorithm(t.chosen, inst.data, t.config);
            sum += structural_metrics(evaluation_matrix(out, inst.truth), inst.truth).f1;
        }
        double chosen = sum / seeds;
        ++total;
        bool hit = chosen >= best - 0.05;
        hits += hit;
        std::string pick_list;
        for (const auto& [id, n] : picks) pick_list += (pick_list.empty() ? "" : "+") + id;
        std::printf("  %-26s selector %.3f (%s), best %.3f (%s)%s\n", sc.id.c_str(), chosen, pick_list.c_str(), best,
                    best_id.c_str(), hit ? "" : "  miss");
    };
    for (const auto& sc : tab) judge(sc, tab_algs, DataKind::tabular);
    for (const auto& sc : ts) judge(sc, ts_algs, DataKind::time_series);
    double rate = static_cast<double>(hits) / total;
    return {rate >= 0.70 && violations_seen == 0,
            std::to_string(hits) + "/" + std::to_string(total) + " scenarios within 0.05 of the best (need >= 70%), " +
                std::to_string(violations_seen) + " hard-filter violations"};
}

// ---- 9 ------------------------------------------------------------------

Outcome robustness_axes() {
    TabularScenario missing;
    missing.missing_rate = 0.3;
    TabularScenario noisy;
    noisy.measurement_error_ratio = 0.5;
    noisy.measurement_error_sd = 1.0;
    auto records = run_benchmark(
        suite_of("robust", {{"clean", TabularScenario{}}, {"missing", missing}, {"measurement", noisy}}, 10),
        {"pc", "notears_linear"});
    bool statuses = std::all_of(records.begin(), records.end(),
                                [](const RunRecord& r) { return r.status != RunStatus::error; });
    double clean = mean_f1(records, "pc", "clean"), miss = mean_f1(records, "pc", "missing");
    return {statuses && clean - miss <= 0.25,
            "PC clean " + fmt("%.3f", clean) + ", 30% missing " + fmt("%.3f", miss) + " (drop " + fmt("%.3f", clean - miss) +
                ", need <= 0.25), measurement " + fmt("%.3f", mean_f1(records, "pc", "measurement")) + "; " +
                std::to_string(records.size()) + " records, " + (statuses ? "no errors" : "errors recorded")};
}

// ---- 10 -----------------------------------------------------------------

Outcome determinism() {
    std::vector<std::string> bad;
    TabularScenario tab;
    tab.missing_rate = 0.1;
    tab.seed = 9;
    if (!same_bits(simulate_tabular(tab).data.values(), simulate_tabular(tab).data.values())) bad.push_back("tabular data");
    TsScenario ts;
    ts.seed = 9;
    if (!same_bits(simulate_timeseries(ts).data.values(), simulate_timeseries(ts).data.values()))
        bad.push_back("time-series data");

    TabularScenario small;
    small.n_nodes = 6;
    small.n_samples = 400;
    Dataset d = simulate_tabular(small).data;
    EdgeConfidence a = bootstrap_edge_frequencies(d, "pc", {}, 20, 5, 1);
    EdgeConfidence b = bootstrap_edge_frequencies(d, "pc", {}, 20, 5, 3);
    if (!same_bits(a.frequency, b.frequency)) bad.push_back("bootstrap frequencies");

    PipelineOptions po;
    po.bootstrap = 10;
    po.seed = 3;
    PipelineResult r1 = run_pipeline(d, po), r2 = run_pipeline(d, po);
    for (ReportFormat f : {ReportFormat::markdown, ReportFormat::json, ReportFormat::csv})
        if (emit_pipeline_report(r1, f) != emit_pipeline_report(r2, f)) bad.push_back("report " + to_string(f));

    BenchOptions opt;
    opt.timeout_seconds = 0.5;
    opt.grace_seconds = 0.5;
    opt.runner = [](const std::string& id, const Dataset& data, const nlohmann::json& c, const CancelToken& cancel) {
        if (id == "iamb")
            for (;;) {
                cancel.check();
                std::this_thread::sleep_for(std::chrono::milliseconds(5));
            }
        return run_algorithm(id, data, c, cancel);
    };
    TabularScenario other = small;
    other.n_nodes = 5;
    other.edge_prob = 0.4;
    ScenarioSuite suite = suite_of("count", {{"a", small}, {"b", other}}, 3);
    std::vector<std::string> algs = {"pc", "notears_linear", "iamb"};
    auto records = run_benchmark(suite, algs, opt);
    if (records.size() != suite.scenarios.size() * algs.size() * static_cast<std::size_t>(suite.seeds))
        bad.push_back("record count");
    std::string md = emit_report(aggregate(records), ReportFormat::markdown);
    if (md.find("| iamb | N/A |") == std::string::npos) bad.push_back("timeout not N/A");
    return {bad.empty(), bad.empty() ? "data, bootstrap, reports and bench counts reproduce; timeouts show N/A"
                                     : "differs: " + join(bad, ", ")};
}

// ---- 11 -----------------------------------------------------------------

Outcome equivalence_suite() {
    int checked = 0, failures = 0;
    for (int n = 1; n <= 5; ++n)
        for (const auto& e : oracle::all_dags(n)) {
            Cpdag c = dag_to_cpdag(Dag(e));
            Dag ext = cpdag_to_dag(c, static_cast<std::uint64_t>(checked));
            failures += !(dag_to_cpdag(ext) == c && oracle::acyclic(ext.edges()));
            ++checked;
        }
    int metric_failures = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        Rng rng = make_rng(s, 11);
        int n = 2 + static_cast<int>(rng() % 10);
        Dag a = erdos_renyi_dag(n, uniform01(rng), s);
        Dag b = erdos_renyi_dag(n, uniform01(rng), s + 200000);
        EdgeMetrics self = structural_metrics(a, a), ab = structural_metrics(a, b), ba = structural_metrics(b, a);
        bool ok = self.shd == 0 && self.f1 == 1.0 && ab.f1 >= 0.0 && ab.f1 <= 1.0 && ab.shd == ba.shd &&
                  ab.tp + ab.fn == b.edge_count() && ab.tp + ab.fp == a.edge_count();
        metric_failures += !ok;
    }
    return {failures == 0 && metric_failures == 0 && checked == 29853,
            std::to_string(checked) + " DAGs round-tripped with " + std::to_string(failures) + " failures; " +
                std::to_string(metric_failures) + " metric identity failures over 10000 pairs"};
}

struct Criterion {
    int number;
    std::function<Outcome()> run;
    double limit_seconds;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, oracle_exactness, 10},   {2, pc_anchor, 30},           {3, notears_anchor, 180},
        {4, lingam_anchor, 600},     {5, timeseries_anchor, 360},  {6, closed_forms, 60},
        {7, gradient_checks, 60},    {8, selector_end_to_end, 1200}, {9, robustness_axes, 600},
        {10, determinism, 600},      {11, equivalence_suite, 600},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.number)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_seconds) {
            o.pass = false;
            o.detail += "; over the " + fmt("%.0f", c.limit_seconds) + " s limit";
        }
        std::printf("criterion %d: %s (%s; %.1f s)\n", c.number, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
