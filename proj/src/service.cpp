#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "causal_atlas/error.hpp"
#include "causal_atlas/service.hpp"
#include "causal_atlas/version.hpp"

#include <httplib.h>

namespace causal_atlas {

namespace fs = std::filesystem;

RunRequest run_request_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "run request must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (key != "csv" && key != "hints" && key != "algorithm" && key != "config" && key != "seed" && key != "bootstrap")
            throw Error(ErrorCode::InvalidArgument, "unknown run request key '" + key + "'");
    if (!j.contains("csv") || !j["csv"].is_string()) throw Error(ErrorCode::InvalidArgument, "run request needs a csv string");
    RunRequest r;
    r.csv = j["csv"];
    if (j.contains("hints")) r.hints = hints_from_json(j["hints"]);
    if (j.contains("algorithm")) r.algorithm = j["algorithm"].get<std::string>();
    if (j.contains("config")) {
        if (!j["config"].is_object()) throw Error(ErrorCode::InvalidArgument, "config must be an object");
        r.config = j["config"];
    }
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("bootstrap")) r.bootstrap = j["bootstrap"].get<int>();
    if (r.bootstrap < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap must be at least 1");
    return r;
}

struct RunStore::Run {
    std::string id;
    fs::path dir;
    Phase phase = Phase::pending;
    std::string error;
    RunRequest request;  // csv left empty; dataset.csv holds it
    Dataset data;
    std::vector<ConstraintSet> history;
    std::vector<std::string> dropped;
    CancelToken cancel;
};

namespace {

bool working(Phase p) {
    return p == Phase::pending || p == Phase::profiling || p == Phase::selecting || p == Phase::discovering ||
           p == Phase::bootstrapping;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.filename().string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path.filename().string());
        out << text;
    }
    fs::rename(tmp, path);
}

std::string run_id(int n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run-%04d", n);
    return buf;
}

}  // namespace

RunStore::RunStore(fs::path root, std::optional<std::string> advisor_endpoint)
    : root_(std::move(root)), advisor_(std::move(advisor_endpoint)) {
    fs::create_directories(root_);
    load_existing();
}

RunStore::~RunStore() {
    {
        std::lock_guard lock(mutex_);
        for (auto& [_, run] : runs_) run->cancel.cancel();
    }
    for (auto& t : workers_)
        if (t.joinable()) t.join();
}

RunStore::Run& RunStore::find(const std::string& id) const {
    auto it = runs_.find(id);
    if (it == runs_.end()) throw Error(ErrorCode::NotFound, "no run '" + id + "'");
    return *it->second;
}

void RunStore::write_artifact(const Run& run, const std::string& name, const std::string& text) const {
    write_file(run.dir / name, text);
}

std::optional<std::string> RunStore::read_artifact(const Run& run, const std::string& name) const {
    if (!fs::exists(run.dir / name)) return std::nullopt;
    return read_file(run.dir / name);
}

void RunStore::persist_state(const Run& run) const {
    nlohmann::json state = {{"id", run.id},
                            {"phase", to_string(run.phase)},
                            {"error", run.error},
                            {"hints", to_json(run.request.hints)},
                            {"algorithm", run.request.algorithm ? nlohmann::json(*run.request.algorithm) : nlohmann::json(nullptr)},
                            {"config", run.request.config},
                            {"seed", run.request.seed},
                            {"bootstrap", run.request.bootstrap},
                            {"dropped_columns", run.dropped},
                            {"constraints", static_cast<int>(run.history.size())}};
    write_artifact(run, "state.json", state.dump(2) + "\n");
}

void RunStore::load_existing() {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root_))
        if (entry.is_directory() && fs::exists(entry.path() / "state.json")) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        nlohmann::json state = nlohmann::json::parse(read_file(dir / "state.json"));
        auto run = std::make_unique<Run>();
        run->id = state.at("id");
        run->dir = dir;
        run->phase = parse_phase(state.at("phase"));
        run->error = state.value("error", "");
        run->request.hints = hints_from_json(state.at("hints"));
        if (!state.at("algorithm").is_null()) run->request.algorithm = state.at("algorithm").get<std::string>();
        run->request.config = state.at("config");
        run->request.seed = state.at("seed");
        run->request.bootstrap = state.at("bootstrap");
        run->dropped = state.value("dropped_columns", std::vector<std::string>{});
        run->data = read_csv(read_file(dir / "dataset.csv"));
        for (int k = 1; k <= state.value("constraints", 0); ++k)
            run->history.push_back(constraint_set_from_json(nlohmann::json::parse(read_file(dir / ("constraints-" + std::to_string(k) + ".json")))));
        if (working(run->phase)) {
            run->phase = Phase::failed;
            run->error = "interrupted by a service restart";
            persist_state(*run);
        }
        int n = 0;
        if (std::sscanf(run->id.c_str(), "run-%d", &n) == 1) next_id_ = std::max(next_id_, n + 1);
        runs_[run->id] = std::move(run);
    }
}

std::string RunStore::create_run(const RunRequest& request) {
    Dataset data = read_csv(request.csv);
    std::lock_guard lock(mutex_);
    auto run = std::make_unique<Run>();
    run->id = run_id(next_id_++);
    run->dir = root_ / run->id;
    run->request = request;
    run->request.csv.clear();
    run->data = std::move(data);
    fs::create_directories(run->dir);
    write_artifact(*run, "dataset.csv", request.csv);
    persist_state(*run);
    Run& ref = *run;
    runs_[run->id] = std::move(run);
    workers_.emplace_back([this, &ref] { execute(ref, {}, std::nullopt); });
    return ref.id;
}

void RunStore::execute(Run& run, std::vector<ConstraintSet> history, std::optional<PipelineResult> previous) {
    PipelineOptions o;
    {
        std::lock_guard lock(mutex_);
        o.seed = run.request.seed;
        o.hints = run.request.hints;
        o.algorithm = run.request.algorithm;
        o.config = run.request.config;
        o.bootstrap = run.request.bootstrap;
        o.advisor_endpoint = advisor_;
    }
    o.on_phase = [&](Phase p, const PipelineResult& partial) {
        if (p == Phase::selecting) write_artifact(run, "profile.json", to_json(partial.profile).dump(2) + "\n");
        if (p == Phase::discovering && !previous) write_artifact(run, "trace.json", to_json(partial.trace).dump(2) + "\n");
        std::lock_guard lock(mutex_);
        if (p == Phase::selecting) run.dropped = partial.dropped_columns;
        run.phase = p;
        persist_state(run);
        changed_.notify_all();
    };
    try {
        PipelineResult r = previous ? rerun_with_constraints(run.data, *previous, history, o, run.cancel)
                                    : run_pipeline(run.data, o, run.cancel);
        if (previous) write_artifact(run, "trace.json", to_json(r.trace).dump(2) + "\n");
        write_artifact(run, "graph.json", graph_json(r).dump(2) + "\n");
        write_artifact(run, "confidence.json", to_json(r.confidence).dump(2) + "\n");
        write_artifact(run, "report.md", emit_pipeline_report(r, ReportFormat::markdown));
        write_artifact(run, "report.json", emit_pipeline_report(r, ReportFormat::json));
        std::lock_guard lock(mutex_);
        run.phase = r.refined.uncertain.empty() ? Phase::done : Phase::awaiting_review;
        run.error.clear();
        persist_state(run);
    } catch (const std::exception& e) {
        std::lock_guard lock(mutex_);
        run.phase = Phase::failed;
        run.error = e.what();
        persist_state(run);
    }
    changed_.notify_all();
}

nlohmann::json RunStore::get_run(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const Run& run = find(id);
    nlohmann::json artifacts = nlohmann::json::object();
    for (const char* name : {"profile", "trace", "graph", "confidence"})
        if (auto text = read_artifact(run, std::string(name) + ".json")) artifacts[name] = nlohmann::json::parse(*text);
    nlohmann::json constraints = nlohmann::json::array();
    for (const auto& c : run.history) constraints.push_back(to_json(c));
    nlohmann::json j = {{"id", run.id}, {"phase", to_string(run.phase)}, {"artifacts", artifacts}, {"constraints", constraints}};
    if (!run.error.empty()) j["error"] = run.error;
    return j;
}

Phase RunStore::phase(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return find(id).phase;
}

Phase RunStore::wait(const std::string& id, double seconds) const {
    std::unique_lock lock(mutex_);
    const Run& run = find(id);
    changed_.wait_for(lock, std::chrono::duration<double>(seconds), [&] { return !working(run.phase); });
    return run.phase;
}

nlohmann::json RunStore::submit_constraints(const std::string& id, const ConstraintSet& constraints) {
    {
        std::lock_guard lock(mutex_);
        Run& run = find(id);
        if (run.phase != Phase::awaiting_review && run.phase != Phase::done)
            throw Error(ErrorCode::InvalidPhase, "run " + id + " is " + to_string(run.phase) + "; constraints need awaiting_review or done");

        // rebuild the earlier result from disk so restarts and live runs behave alike
        PipelineResult previous;
        previous.profile = profile_from_json(nlohmann::json::parse(read_file(run.dir / "profile.json")));
        previous.trace = selection_trace_from_json(nlohmann::json::parse(read_file(run.dir / "trace.json")));
        previous.labels = nlohmann::json::parse(read_file(run.dir / "graph.json")).at("nodes").get<std::vector<std::string>>();
        previous.dropped_columns = run.dropped;
        previous.seed = run.request.seed;
        previous.bootstrap = run.request.bootstrap;
        previous.timestamp = PipelineOptions{}.timestamp;

        std::vector<ConstraintSet> history = run.history;
        history.push_back(constraints);
        resolve_constraints(merge_constraints(history), previous.labels, previous.profile.data_kind == DataKind::tabular);

        run.history = history;
        write_artifact(run, "constraints-" + std::to_string(history.size()) + ".json", to_json(constraints).dump(2) + "\n");
        run.phase = Phase::discovering;
        persist_state(run);
        workers_.emplace_back([this, &run, history, previous] { execute(run, history, previous); });
    }
    return get_run(id);
}

std::string RunStore::report(const std::string& id, ReportFormat format) {
    std::lock_guard lock(mutex_);
    Run& run = find(id);
    if (run.phase != Phase::awaiting_review && run.phase != Phase::done)
        throw Error(ErrorCode::InvalidPhase, "run " + id + " is " + to_string(run.phase) + "; no report yet");
    if (run.phase == Phase::awaiting_review) {
        run.phase = Phase::done;
        persist_state(run);
        changed_.notify_all();
    }
    if (format == ReportFormat::csv) throw Error(ErrorCode::UnknownFormat, "reports are served as md or json");
    return read_file(run.dir / (format == ReportFormat::json ? "report.json" : "report.md"));
}

// ---- HTTP ---------------------------------------------------------------

int service_port_from_env() {
    const char* v = std::getenv("CAUSAL_ATLAS_PORT");
    if (!v || !*v) return 8765;
    char* end = nullptr;
    long port = std::strtol(v, &end, 10);
    if (*end != '\0' || port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "CAUSAL_ATLAS_PORT must be a port number");
    return static_cast<int>(port);
}

struct HttpService::Impl {
    RunStore& store;
    httplib::Server server;
    std::thread thread;

    explicit Impl(RunStore& s) : store(s) {}
};

namespace {

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::InvalidPhase: return 409;
        case ErrorCode::Io:
        case ErrorCode::Cancelled:
        case ErrorCode::NonConvergence:
        case ErrorCode::SingularSubmatrix:
        case ErrorCode::SingularInstantaneousSystem:
        case ErrorCode::NoConsistentExtension: return 500;
        default: return 400;
    }
}

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        send_json(res, http_status(e.code()), {{"error", to_string(e.code())}, {"message", e.what()}});
    } catch (const nlohmann::json::exception& e) {
        send_json(res, 400, {{"error", "InvalidArgument"}, {"message", e.what()}});
    } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
}

}  // namespace

HttpService::HttpService(RunStore& store) : impl_(std::make_unique<Impl>(store)) {
    auto& svr = impl_->server;
    RunStore& st = store;
    svr.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", "ok"}, {"version", kVersion}});
    });
    svr.Post("/runs", [&st](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            RunRequest r;
            if (req.get_header_value("Content-Type").rfind("text/csv", 0) == 0) {
                r.csv = req.body;
                if (req.has_param("seed")) r.seed = std::stoull(req.get_param_value("seed"));
            } else {
                r = run_request_from_json(nlohmann::json::parse(req.body));
            }
            std::string id = st.create_run(r);
            send_json(res, 201, {{"id", id}});
        });
    });
    svr.Get(R"(/runs/([A-Za-z0-9_-]+))", [&st](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, st.get_run(req.matches[1])); });
    });
    svr.Post(R"(/runs/([A-Za-z0-9_-]+)/constraints)", [&st](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            ConstraintSet c = constraint_set_from_json(nlohmann::json::parse(req.body));
            send_json(res, 200, st.submit_constraints(req.matches[1], c));
        });
    });
    svr.Get(R"(/runs/([A-Za-z0-9_-]+)/report)", [&st](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::string fmt = req.has_param("format") ? req.get_param_value("format") : "md";
            ReportFormat f = parse_report_format(fmt);
            if (f == ReportFormat::csv) throw Error(ErrorCode::UnknownFormat, "format must be md or json");
            std::string body = st.report(req.matches[1], f);
            res.status = 200;
            res.set_content(body, f == ReportFormat::json ? "application/json" : "text/markdown");
        });
    });
}

HttpService::~HttpService() { stop(); }

int HttpService::start(int port) {
    auto& svr = impl_->server;
    int bound = port == 0 ? svr.bind_to_any_port("127.0.0.1") : (svr.bind_to_port("127.0.0.1", port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::Io, "cannot bind 127.0.0.1:" + std::to_string(port));
    impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
    svr.wait_until_ready();
    return bound;
}

void HttpService::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpService::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace causal_atlas
