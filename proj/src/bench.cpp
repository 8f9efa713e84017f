#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "causal_atlas/bench.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/text.hpp"

namespace causal_atlas {

// ---- suites -------------------------------------------------------------

nlohmann::json to_json(const ScenarioSuite& suite) {
    nlohmann::json scenarios = nlohmann::json::array();
    for (const auto& s : suite.scenarios) {
        nlohmann::json j = {{"id", s.id}};
        if (const auto* t = std::get_if<TabularScenario>(&s.config)) {
            j["kind"] = "tabular";
            j["scenario"] = to_json(*t);
        } else {
            j["kind"] = "time_series";
            j["scenario"] = to_json(std::get<TsScenario>(s.config));
        }
        scenarios.push_back(j);
    }
    return {{"name", suite.name}, {"seeds", suite.seeds}, {"timeout_seconds", suite.timeout_seconds},
            {"scenarios", scenarios}};
}

ScenarioSuite suite_from_json(const nlohmann::json& j) {
    ScenarioSuite s;
    try {
        s.name = j.at("name").get<std::string>();
        s.seeds = j.value("seeds", s.seeds);
        s.timeout_seconds = j.value("timeout_seconds", s.timeout_seconds);
        for (const auto& e : j.at("scenarios")) {
            BenchScenario b;
            b.id = e.at("id").get<std::string>();
            const std::string kind = e.value("kind", "tabular");
            if (kind == "tabular")
                b.config = tabular_scenario_from_json(e.at("scenario"));
            else if (kind == "time_series")
                b.config = ts_scenario_from_json(e.at("scenario"));
            else
                throw Error(ErrorCode::InvalidArgument, "unknown scenario kind '" + kind + "'");
            s.scenarios.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed suite: ") + e.what());
    }
    if (s.scenarios.empty()) throw Error(ErrorCode::InvalidArgument, "suite '" + s.name + "' has no scenarios");
    if (s.seeds < 1) throw Error(ErrorCode::InvalidArgument, "suite needs at least one seed");
    return s;
}

namespace {

template <typename T, typename F>
ScenarioSuite axis(const std::string& name, const std::string& key, const std::vector<T>& values, F apply) {
    ScenarioSuite s;
    s.name = name;
    for (T v : values) {
        auto [id_value, config] = apply(v);
        s.scenarios.push_back({key + "=" + id_value, config});
    }
    return s;
}

}  // namespace

std::map<std::string, ScenarioSuite> default_suites() {
    std::map<std::string, ScenarioSuite> out;
    auto add = [&](ScenarioSuite s) { out[s.name] = std::move(s); };

    add(ScenarioSuite{"tabular_default", {{"default", TabularScenario{}}}});
    add(axis("tabular_density", "edge_prob", std::vector<double>{0.11, 0.22, 0.33, 0.44, 0.56}, [](double v) {
        TabularScenario s;
        s.edge_prob = v;
        return std::pair{format_double(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_nodes", "n_nodes", std::vector<int>{5, 10, 25, 50}, [](int v) {
        TabularScenario s;
        s.n_nodes = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_samples", "n_samples", std::vector<int>{500, 1000, 2000, 5000}, [](int v) {
        TabularScenario s;
        s.n_samples = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_noise", "noise", std::vector<NoiseKind>{NoiseKind::gaussian, NoiseKind::uniform}, [](NoiseKind v) {
        TabularScenario s;
        s.noise = v;
        return std::pair{to_string(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_function", "function", std::vector<FunctionType>{FunctionType::linear, FunctionType::mlp},
             [](FunctionType v) {
                 TabularScenario s;
                 s.function_type = v;
                 return std::pair{to_string(v), ScenarioConfig{s}};
             }));
    add(axis("tabular_discrete", "discrete_ratio", std::vector<double>{0.0, 0.2}, [](double v) {
        TabularScenario s;
        s.discrete_ratio = v;
        return std::pair{format_double(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_measurement", "measurement_error_ratio", std::vector<double>{0.0, 0.3, 0.5}, [](double v) {
        TabularScenario s;
        s.measurement_error_ratio = v;
        s.measurement_error_sd = v > 0 ? 1.0 : 0.0;
        return std::pair{format_double(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_missing", "missing_rate", std::vector<double>{0.0, 0.1, 0.3}, [](double v) {
        TabularScenario s;
        s.missing_rate = v;
        return std::pair{format_double(v), ScenarioConfig{s}};
    }));
    add(axis("tabular_domains", "n_domains", std::vector<int>{1, 2, 5}, [](int v) {
        TabularScenario s;
        s.n_domains = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));

    add(ScenarioSuite{"ts_default", {{"default", TsScenario{}}}});
    add(axis("ts_nodes", "n_nodes", std::vector<int>{5, 10, 20}, [](int v) {
        TsScenario s;
        s.n_nodes = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));
    add(axis("ts_lag", "max_lag", std::vector<int>{3, 5, 10, 20}, [](int v) {
        TsScenario s;
        s.max_lag = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));
    add(axis("ts_samples", "n_steps", std::vector<int>{500, 1000, 2000, 5000}, [](int v) {
        TsScenario s;
        s.n_steps = v;
        return std::pair{std::to_string(v), ScenarioConfig{s}};
    }));
    add(axis("ts_noise", "noise", std::vector<NoiseKind>{NoiseKind::gaussian, NoiseKind::uniform}, [](NoiseKind v) {
        TsScenario s;
        s.noise = v;
        return std::pair{to_string(v), ScenarioConfig{s}};
    }));
    return out;
}

BenchInstance make_instance(const ScenarioConfig& config, std::uint64_t seed) {
    BenchInstance inst;
    if (const auto* t = std::get_if<TabularScenario>(&config)) {
        TabularScenario s = *t;
        s.seed = seed;
        TabularSample smp = simulate_tabular(s);
        inst.data = smp.data.has_missing() ? impute(smp.data) : smp.data;
        inst.truth = smp.truth.edges();
    } else {
        TsScenario s = std::get<TsScenario>(config);
        s.seed = seed;
        TsSample smp = simulate_timeseries(s);
        inst.data = smp.data;
        inst.truth = smp.summary.edges();
    }
    return inst;
}

// ---- records ------------------------------------------------------------

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::ok: return "ok";
        case RunStatus::timeout: return "timeout";
        case RunStatus::error: return "error";
    }
    return "error";
}

RunStatus parse_run_status(const std::string& s) {
    for (auto v : {RunStatus::ok, RunStatus::timeout, RunStatus::error})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown run status '" + s + "'");
}

nlohmann::json to_json(const RunRecord& r) {
    nlohmann::json j = {{"scenario", r.scenario}, {"algorithm", r.algorithm}, {"config", r.config},
                        {"seed", r.seed},         {"runtime_seconds", r.runtime_seconds},
                        {"status", to_string(r.status)}};
    if (r.metrics) {
        const EdgeMetrics& m = *r.metrics;
        j["metrics"] = {{"tp", m.tp},         {"fp", m.fp},       {"fn", m.fn}, {"precision", m.precision},
                        {"recall", m.recall}, {"f1", m.f1}, {"shd", m.shd}};
    } else {
        j["metrics"] = nullptr;
    }
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.scenario = j.at("scenario").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.config = j.value("config", nlohmann::json::object());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.runtime_seconds = j.value("runtime_seconds", 0.0);
    r.status = parse_run_status(j.at("status").get<std::string>());
    r.message = j.value("message", "");
    if (j.contains("metrics") && !j["metrics"].is_null()) {
        const auto& m = j["metrics"];
        EdgeMetrics e;
        e.tp = m.at("tp");
        e.fp = m.at("fp");
        e.fn = m.at("fn");
        e.precision = m.at("precision");
        e.recall = m.at("recall");
        e.f1 = m.at("f1");
        e.shd = m.at("shd");
        r.metrics = e;
    }
    return r;
}

std::string to_jsonl(const std::vector<RunRecord>& records) {
    std::string out;
    for (const auto& r : records) out += to_json(r).dump() + "\n";
    return out;
}

std::vector<RunRecord> records_from_jsonl(const std::string& text) {
    std::vector<RunRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        try {
            out.push_back(run_record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, std::string("malformed record line: ") + e.what());
        }
    }
    return out;
}

// ---- execution ----------------------------------------------------------

namespace {

struct TaskState {
    std::mutex m;
    std::condition_variable cv;
    bool done = false;
    std::optional<AlgorithmOutput> output;
    std::optional<ErrorCode> code;
    std::string message;
};

RunRecord run_one(const AlgorithmRunner& runner, const std::string& algo, const std::shared_ptr<const BenchInstance>& inst,
                  const nlohmann::json& config, double timeout, double grace) {
    RunRecord rec;
    rec.algorithm = algo;
    rec.config = config;
    auto state = std::make_shared<TaskState>();
    CancelToken token;
    const auto start = std::chrono::steady_clock::now();
    std::thread worker([state, inst, runner, algo, config, token] {
        std::optional<AlgorithmOutput> out;
        std::optional<ErrorCode> code;
        std::string message;
        try {
            out = runner(algo, inst->data, config, token);
        } catch (const Error& e) {
            code = e.code();
            message = e.what();
        } catch (const std::exception& e) {
            code = ErrorCode::Io;
            message = e.what();
        }
        std::lock_guard<std::mutex> lock(state->m);
        state->output = std::move(out);
        state->code = code;
        state->message = std::move(message);
        state->done = true;
        state->cv.notify_all();
    });

    std::unique_lock<std::mutex> lock(state->m);
    const auto cap = std::chrono::duration<double>(timeout);
    bool finished = state->cv.wait_for(lock, cap, [&] { return state->done; });
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!finished || elapsed > timeout) {
        token.cancel();
        bool stopped = state->cv.wait_for(lock, std::chrono::duration<double>(grace), [&] { return state->done; });
        lock.unlock();
        if (stopped)
            worker.join();
        else
            worker.detach();
        rec.status = RunStatus::timeout;
        rec.runtime_seconds = timeout;
        rec.message = "exceeded " + format_double(timeout) + " s";
        return rec;
    }
    lock.unlock();
    worker.join();
    rec.runtime_seconds = elapsed;
    if (state->output) {
        rec.status = RunStatus::ok;
        rec.metrics = structural_metrics(evaluation_matrix(*state->output, inst->truth), inst->truth);
    } else if (state->code == ErrorCode::Cancelled) {
        rec.status = RunStatus::timeout;
        rec.message = state->message;
    } else {
        rec.status = RunStatus::error;
        rec.message = state->message;
    }
    return rec;
}

}  // namespace

std::vector<RunRecord> run_benchmark(const ScenarioSuite& suite, const std::vector<std::string>& algorithms,
                                     const BenchOptions& options) {
    for (const auto& a : algorithms) algorithm_info(a);
    const AlgorithmRunner runner = options.runner ? options.runner : AlgorithmRunner(run_algorithm);
    const double timeout = options.timeout_seconds.value_or(suite.timeout_seconds);
    const std::size_t n_alg = algorithms.size();
    const std::size_t n_seed = static_cast<std::size_t>(suite.seeds);
    const std::size_t n_pairs = suite.scenarios.size() * n_seed;
    std::vector<RunRecord> records(n_pairs * n_alg);

    auto work = [&](std::size_t pair) {
        const BenchScenario& sc = suite.scenarios[pair / n_seed];
        const std::uint64_t seed = options.seed_offset + pair % n_seed;
        std::shared_ptr<const BenchInstance> inst;
        std::string sim_error;
        try {
            inst = std::make_shared<const BenchInstance>(make_instance(sc.config, seed));
        } catch (const std::exception& e) {
            sim_error = e.what();
        }
        for (std::size_t a = 0; a < n_alg; ++a) {
            const std::string& algo = algorithms[a];
            auto cfg_it = options.configs.find(algo);
            nlohmann::json cfg = cfg_it == options.configs.end() ? nlohmann::json::object() : cfg_it->second;
            RunRecord rec;
            if (inst) {
                rec = run_one(runner, algo, inst, cfg, timeout, options.grace_seconds);
            } else {
                rec.algorithm = algo;
                rec.config = cfg;
                rec.status = RunStatus::error;
                rec.message = "simulation failed: " + sim_error;
            }
            rec.scenario = sc.id;
            rec.seed = seed;
            records[pair * n_alg + a] = std::move(rec);
        }
    };

    const int threads = std::max(1, std::min<int>(options.parallelism, static_cast<int>(n_pairs)));
    if (threads == 1) {
        for (std::size_t p = 0; p < n_pairs; ++p) work(p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t p; (p = next.fetch_add(1)) < n_pairs;) work(p);
            });
        for (auto& t : pool) t.join();
    }
    return records;
}

// ---- aggregation --------------------------------------------------------

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{r.scenario, r.algorithm}].push_back(&r);
    std::vector<AggregateRow> rows;
    for (auto& [key, group] : groups) {
        // sort for permutation invariance of floating-point sums
        std::sort(group.begin(), group.end(), [](const RunRecord* a, const RunRecord* b) {
            if (a->seed != b->seed) return a->seed < b->seed;
            return a->runtime_seconds < b->runtime_seconds;
        });
        AggregateRow row;
        row.scenario = key.first;
        row.algorithm = key.second;
        row.runs = static_cast<int>(group.size());
        std::vector<double> f1, shd, prec, rec;
        double runtime = 0.0;
        for (const RunRecord* r : group) {
            runtime += r->runtime_seconds;
            if (r->status != RunStatus::ok || !r->metrics) continue;
            f1.push_back(r->metrics->f1);
            shd.push_back(r->metrics->shd);
            prec.push_back(r->metrics->precision);
            rec.push_back(r->metrics->recall);
        }
        row.completed = static_cast<int>(f1.size());
        row.completion_rate = row.runs ? static_cast<double>(row.completed) / row.runs : 0.0;
        row.mean_runtime = row.runs ? runtime / row.runs : 0.0;
        auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
        if (!f1.empty()) {
            row.mean_f1 = mean(f1);
            row.mean_shd = mean(shd);
            row.mean_precision = mean(prec);
            row.mean_recall = mean(rec);
            if (f1.size() > 1) {
                double ss = 0.0;
                for (double v : f1) ss += (v - *row.mean_f1) * (v - *row.mean_f1);
                row.std_f1 = std::sqrt(ss / static_cast<double>(f1.size() - 1));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- reports ------------------------------------------------------------

ReportFormat parse_report_format(const std::string& s) {
    if (s == "md" || s == "markdown") return ReportFormat::markdown;
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw Error(ErrorCode::UnknownFormat, "unknown report format '" + s + "'");
}

std::string to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::markdown: return "md";
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
    }
    return "md";
}

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

nlohmann::json opt_num(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string csv_num(const std::optional<double>& v) { return v ? format_double(*v) : kNotAvailable; }

const char* kCsvHeader =
    "scenario,algorithm,runs,completed,mean_f1,std_f1,mean_shd,mean_precision,mean_recall,mean_runtime,completion_rate";

}  // namespace

std::string emit_report(const std::vector<AggregateRow>& rows, ReportFormat format, const ReportMeta& meta) {
    if (format == ReportFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"scenario", r.scenario},
                           {"algorithm", r.algorithm},
                           {"runs", r.runs},
                           {"completed", r.completed},
                           {"mean_f1", opt_num(r.mean_f1)},
                           {"std_f1", r.std_f1},
                           {"mean_shd", opt_num(r.mean_shd)},
                           {"mean_precision", opt_num(r.mean_precision)},
                           {"mean_recall", opt_num(r.mean_recall)},
                           {"mean_runtime", r.mean_runtime},
                           {"completion_rate", r.completion_rate}});
        nlohmann::json m = {{"title", meta.title}, {"timestamp", meta.timestamp}, {"version", meta.version}};
        for (const auto& [k, v] : meta.extra) m[k] = v;
        return nlohmann::json{{"meta", m}, {"rows", arr}}.dump(2) + "\n";
    }
    if (format == ReportFormat::csv) {
        std::string out = std::string(kCsvHeader) + "\n";
        for (const auto& r : rows)
            out += join({r.scenario, r.algorithm, std::to_string(r.runs), std::to_string(r.completed), csv_num(r.mean_f1),
                         format_double(r.std_f1), csv_num(r.mean_shd), csv_num(r.mean_precision), csv_num(r.mean_recall),
                         format_double(r.mean_runtime), format_double(r.completion_rate)},
                        ",") +
                   "\n";
        return out;
    }
    std::string out = "# " + meta.title + "\n\n";
    out += "- generated: " + meta.timestamp + "\n";
    if (!meta.version.empty()) out += "- version: " + meta.version + "\n";
    for (const auto& [k, v] : meta.extra) out += "- " + k + ": " + v + "\n";
    out += "\n| scenario | algorithm | F1 (mean ± std) | SHD | precision | recall | runtime (s) | completed |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        std::string f1 = r.mean_f1 ? fixed3(*r.mean_f1) + " ± " + fixed3(r.std_f1) : kNotAvailable;
        auto cell = [](const std::optional<double>& v) { return v ? fixed3(*v) : std::string(kNotAvailable); };
        out += "| " + r.scenario + " | " + r.algorithm + " | " + f1 + " | " + cell(r.mean_shd) + " | " +
               cell(r.mean_precision) + " | " + cell(r.mean_recall) + " | " + fixed3(r.mean_runtime) + " | " +
               std::to_string(r.completed) + "/" + std::to_string(r.runs) + " |\n";
    }
    return out;
}

std::vector<AggregateRow> aggregates_from_json(const nlohmann::json& j) {
    std::vector<AggregateRow> rows;
    auto opt = [](const nlohmann::json& v) { return v.is_null() ? std::optional<double>{} : v.get<double>(); };
    for (const auto& e : j.at("rows")) {
        AggregateRow r;
        r.scenario = e.at("scenario");
        r.algorithm = e.at("algorithm");
        r.runs = e.at("runs");
        r.completed = e.at("completed");
        r.mean_f1 = opt(e.at("mean_f1"));
        r.std_f1 = e.at("std_f1");
        r.mean_shd = opt(e.at("mean_shd"));
        r.mean_precision = opt(e.at("mean_precision"));
        r.mean_recall = opt(e.at("mean_recall"));
        r.mean_runtime = e.at("mean_runtime");
        r.completion_rate = e.at("completion_rate");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AggregateRow> aggregates_from_csv(const std::string& text) {
    std::vector<AggregateRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (trim(line) != kCsvHeader) throw Error(ErrorCode::MalformedCsv, "unexpected aggregate header");
    auto num = [](const std::string& s) {
        double v = 0.0;
        if (!parse_double(s, v)) throw Error(ErrorCode::MalformedCsv, "cannot parse '" + s + "'");
        return v;
    };
    auto opt = [&](const std::string& s) { return s == kNotAvailable ? std::optional<double>{} : num(s); };
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> c = split(line, ',');
        if (c.size() != 11) throw Error(ErrorCode::MalformedCsv, "aggregate row has " + std::to_string(c.size()) + " cells");
        AggregateRow r;
        r.scenario = c[0];
        r.algorithm = c[1];
        r.runs = static_cast<int>(num(c[2]));
        r.completed = static_cast<int>(num(c[3]));
        r.mean_f1 = opt(c[4]);
        r.std_f1 = num(c[5]);
        r.mean_shd = opt(c[6]);
        r.mean_precision = opt(c[7]);
        r.mean_recall = opt(c[8]);
        r.mean_runtime = num(c[9]);
        r.completion_rate = num(c[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace causal_atlas
