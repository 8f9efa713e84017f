#include <csignal>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "causal_atlas/algorithms.hpp"
#include "causal_atlas/bench.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/pipeline.hpp"
#include "causal_atlas/selector.hpp"
#include "causal_atlas/service.hpp"
#include "causal_atlas/simulate.hpp"
#include "causal_atlas/text.hpp"
#include "causal_atlas/version.hpp"

using namespace causal_atlas;
namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;
constexpr int kRuntimeError = 4;

/// A JSON argument given inline or as a path to a file.
nlohmann::json json_arg(const std::string& text) {
    if (text.empty()) return nlohmann::json::object();
    std::string body = fs::exists(text) ? read_text_file(text) : text;
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, "not valid JSON: " + text);
    return j;
}

void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
    if (out_dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / name).string(), text);
    std::cerr << "wrote " << (fs::path(out_dir) / name).string() << "\n";
}

ProfileHints load_hints(const std::string& hints, bool time_series) {
    ProfileHints h = hints.empty() ? ProfileHints{} : hints_from_json(json_arg(hints));
    if (time_series) h.data_kind = DataKind::time_series;
    return h;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& part : split(s, ','))
        if (auto t = trim(part); !t.empty()) out.push_back(t);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal_atlas: profile data, select and run causal discovery, refine and report"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string data, out_dir, hints, algorithm, config, suite_arg = "tabular_default", algorithms, advisor, scenario, format = "md";
    std::uint64_t seed = 0;
    double timeout_seconds = 0;
    int bootstrap = kDefaultBootstrap, parallelism = 1, seeds = 0;
    bool time_series = false;

    auto* simulate = app.add_subcommand("simulate", "simulate a scenario to CSV plus its true graph");
    simulate->add_option("--scenario", scenario, "JSON {kind: tabular|time_series, scenario: {...}} or a file holding it");
    simulate->add_option("--seed", seed, "scenario seed");
    simulate->add_option("--out-dir", out_dir, "output directory")->required();

    auto* diagnose = app.add_subcommand("diagnose", "profile a CSV dataset");
    diagnose->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
    diagnose->add_option("--seed", seed, "seed for subsampling");
    diagnose->add_option("--hints", hints, "profile hints as JSON or a JSON file");
    diagnose->add_flag("--time-series", time_series, "treat rows as consecutive time steps");
    diagnose->add_option("--out-dir", out_dir, "write profile.json here instead of stdout");

    auto* discover = app.add_subcommand("discover", "run one discovery algorithm");
    discover->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
    discover->add_option("--algorithm", algorithm, "algorithm id")->required();
    discover->add_option("--config", config, "parameters as JSON or a JSON file");
    discover->add_option("--out-dir", out_dir, "write graph.json here instead of stdout");

    auto* select = app.add_subcommand("select", "profile a dataset and select an algorithm");
    select->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
    select->add_option("--seed", seed, "profiling seed");
    select->add_option("--hints", hints, "profile hints as JSON or a JSON file");
    select->add_flag("--time-series", time_series, "treat rows as consecutive time steps");
    select->add_option("--advisor-endpoint", advisor, "http://host:port/path of an external advisor");
    select->add_option("--out-dir", out_dir, "write trace.json here instead of stdout");

    auto* bench = app.add_subcommand("bench", "run a benchmark suite");
    bench->add_option("--suite", suite_arg, "built-in suite name, or a suite JSON file");
    bench->add_option("--algorithms", algorithms, "comma-separated algorithm ids")->required();
    bench->add_option("--seeds", seeds, "override the suite's seed count");
    bench->add_option("--seed", seed, "first seed");
    bench->add_option("--timeout-seconds", timeout_seconds, "per-run cap");
    bench->add_option("--parallelism", parallelism, "concurrent (scenario, seed) groups");
    bench->add_option("--out-dir", out_dir, "directory for records.jsonl, aggregates.json, report.md, report.csv")->required();

    auto* pipeline = app.add_subcommand("pipeline", "end-to-end analysis of one dataset");
    pipeline->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
    pipeline->add_option("--seed", seed, "master seed");
    pipeline->add_option("--hints", hints, "profile hints as JSON or a JSON file");
    pipeline->add_flag("--time-series", time_series, "treat rows as consecutive time steps");
    pipeline->add_option("--algorithm", algorithm, "skip selection and run this algorithm");
    pipeline->add_option("--config", config, "parameter overrides as JSON or a JSON file");
    pipeline->add_option("--bootstrap", bootstrap, "bootstrap replicates")->check(CLI::PositiveNumber);
    pipeline->add_option("--parallelism", parallelism, "bootstrap worker threads");
    pipeline->add_option("--advisor-endpoint", advisor, "http://host:port/path of an external advisor");
    pipeline->add_option("--format", format, "md, json or csv");
    pipeline->add_option("--out-dir", out_dir, "write report and graph here instead of stdout");

    auto* serve = app.add_subcommand("serve", "local HTTP service (port from CAUSAL_ATLAS_PORT)");
    serve->add_option("--out-dir", out_dir, "directory holding runs/")->required();
    serve->add_option("--advisor-endpoint", advisor, "http://host:port/path of an external advisor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (const CLI::App* sub : app.get_subcommands())
            if (sub) failing = sub;
        std::cerr << failing->help();
        return kUsageError;
    }

    try {
        auto load = [&] {
            Dataset d = read_csv_file(data);
            if (time_series && !d.is_time_series())
                d = Dataset(d.values(), d.columns(), d.domain_index(),
                            IntVector::LinSpaced(d.n_samples(), 0, static_cast<int>(d.n_samples()) - 1));
            return d;
        };
        std::optional<std::string> advisor_opt = advisor.empty() ? std::nullopt : std::optional<std::string>(advisor);

        if (*simulate) {
            nlohmann::json spec = scenario.empty() ? nlohmann::json{{"kind", "tabular"}, {"scenario", nlohmann::json::object()}}
                                                   : json_arg(scenario);
            const std::string kind = spec.value("kind", "tabular");
            nlohmann::json body = spec.value("scenario", nlohmann::json::object());
            if (kind == "tabular") {
                TabularScenario s = tabular_scenario_from_json(body);
                if (simulate->count("--seed")) s.seed = seed;
                TabularSample t = simulate_tabular(s);
                emit(out_dir, "data.csv", write_csv(t.data));
                emit(out_dir, "truth.json", to_json(static_cast<const Digraph&>(t.truth)).dump(2) + "\n");
                emit(out_dir, "scenario.json", nlohmann::json{{"kind", kind}, {"scenario", to_json(s)}}.dump(2) + "\n");
            } else if (kind == "time_series") {
                TsScenario s = ts_scenario_from_json(body);
                if (simulate->count("--seed")) s.seed = seed;
                TsSample t = simulate_timeseries(s);
                emit(out_dir, "data.csv", write_csv(t.data));
                emit(out_dir, "truth.json", to_json(t.summary).dump(2) + "\n");
                emit(out_dir, "temporal_truth.json", to_json(t.truth).dump(2) + "\n");
                emit(out_dir, "scenario.json", nlohmann::json{{"kind", kind}, {"scenario", to_json(s)}}.dump(2) + "\n");
            } else {
                throw Error(ErrorCode::InvalidArgument, "scenario kind must be tabular or time_series");
            }
        } else if (*diagnose) {
            DatasetProfile p = profile_dataset(load(), load_hints(hints, time_series), seed);
            emit(out_dir, "profile.json", to_json(p).dump(2) + "\n");
        } else if (*discover) {
            AlgorithmOutput out = run_algorithm(algorithm, load(), json_arg(config));
            emit(out_dir, "graph.json", to_json(out).dump(2) + "\n");
        } else if (*select) {
            std::vector<std::string> dropped, notes;
            Dataset d = prepare_dataset(load(), dropped, notes);
            DatasetProfile p = profile_dataset(d, load_hints(hints, time_series), seed);
            SelectionTrace t = advisor_rerank(select_algorithm(p), p, advisor_opt);
            emit(out_dir, "trace.json", to_json(t).dump(2) + "\n");
        } else if (*bench) {
            auto suites = default_suites();
            ScenarioSuite suite;
            if (auto it = suites.find(suite_arg); it != suites.end())
                suite = it->second;
            else if (fs::exists(suite_arg))
                suite = suite_from_json(json_arg(suite_arg));
            else
                throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite_arg + "'");
            if (seeds > 0) suite.seeds = seeds;
            BenchOptions opt;
            if (timeout_seconds > 0) opt.timeout_seconds = timeout_seconds;
            opt.parallelism = parallelism;
            opt.seed_offset = seed;
            std::vector<std::string> ids = split_list(algorithms);
            for (const auto& id : ids) algorithm_info(id);
            std::vector<RunRecord> records = run_benchmark(suite, ids, opt);
            std::vector<AggregateRow> rows = aggregate(records);
            ReportMeta meta;
            meta.title = "Benchmark report: " + suite.name;
            meta.version = kVersion;
            meta.extra = {{"seeds", std::to_string(suite.seeds) + " from " + std::to_string(seed)},
                          {"algorithms", join(ids, ", ")}};
            emit(out_dir, "records.jsonl", to_jsonl(records));
            emit(out_dir, "aggregates.json", emit_report(rows, ReportFormat::json, meta));
            emit(out_dir, "report.md", emit_report(rows, ReportFormat::markdown, meta));
            emit(out_dir, "report.csv", emit_report(rows, ReportFormat::csv, meta));
        } else if (*pipeline) {
            ReportFormat f = parse_report_format(format);
            PipelineOptions o;
            o.seed = seed;
            o.hints = load_hints(hints, time_series);
            if (!algorithm.empty()) o.algorithm = algorithm;
            o.config = json_arg(config);
            o.bootstrap = bootstrap;
            o.parallelism = parallelism;
            o.advisor_endpoint = advisor_opt;
            o.on_phase = [](Phase p, const PipelineResult&) { std::cerr << "[" << to_string(p) << "]\n"; };
            PipelineResult r = run_pipeline(load(), o);
            const char* ext = f == ReportFormat::json ? "json" : f == ReportFormat::csv ? "csv" : "md";
            emit(out_dir, std::string("report.") + ext, emit_pipeline_report(r, f));
            if (!out_dir.empty()) emit(out_dir, "graph.json", graph_json(r).dump(2) + "\n");
        } else if (*serve) {
            RunStore store(fs::path(out_dir) / "runs", advisor_opt);
            HttpService http(store);
            int port = http.start(service_port_from_env());
            std::cerr << "listening on http://127.0.0.1:" << port << "\n";
            http.wait();
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_data_error(e.code()) ? kDataError : kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
