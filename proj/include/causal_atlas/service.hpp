#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/pipeline.hpp"

namespace causal_atlas {

struct RunRequest {
    std::string csv;
    ProfileHints hints;
    std::optional<std::string> algorithm;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    int bootstrap = kDefaultBootstrap;
};

/// POST /runs body: {"csv": text, "hints"?, "algorithm"?, "config"?, "seed"?, "bootstrap"?}.
RunRequest run_request_from_json(const nlohmann::json& j);

/// Runs on disk under `root`/<id>/ with dataset.csv, state.json, profile.json,
/// trace.json, graph.json, confidence.json, constraints-N.json, report.md and
/// report.json. Opening a store reloads every run found there; runs that were
/// interrupted mid-pipeline come back as failed.
class RunStore {
public:
    explicit RunStore(std::filesystem::path root, std::optional<std::string> advisor_endpoint = std::nullopt);
    ~RunStore();
    RunStore(const RunStore&) = delete;
    RunStore& operator=(const RunStore&) = delete;

    /// Parses the CSV (MalformedCsv on failure), registers a pending run and
    /// starts its pipeline on a background thread.
    std::string create_run(const RunRequest& request);
    /// {id, phase, error?, artifacts: {profile?, trace?, graph?, confidence?}, constraints: [...]}
    nlohmann::json get_run(const std::string& id) const;
    Phase phase(const std::string& id) const;
    /// Requires awaiting_review or done; the whole history is re-applied.
    nlohmann::json submit_constraints(const std::string& id, const ConstraintSet& constraints);
    /// Finalizes a run awaiting review; InvalidPhase while still running.
    std::string report(const std::string& id, ReportFormat format);
    /// Blocks until the run leaves the working phases or `seconds` pass.
    Phase wait(const std::string& id, double seconds) const;

    const std::filesystem::path& root() const { return root_; }

private:
    struct Run;
    Run& find(const std::string& id) const;
    void execute(Run& run, std::vector<ConstraintSet> history, std::optional<PipelineResult> previous);
    void persist_state(const Run& run) const;
    void write_artifact(const Run& run, const std::string& name, const std::string& text) const;
    std::optional<std::string> read_artifact(const Run& run, const std::string& name) const;
    void load_existing();

    std::filesystem::path root_;
    std::optional<std::string> advisor_;
    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::map<std::string, std::unique_ptr<Run>> runs_;
    std::vector<std::thread> workers_;
    int next_id_ = 1;
};

/// HTTP front end: POST /runs, GET /runs/{id}, POST /runs/{id}/constraints,
/// GET /runs/{id}/report?format=md|json, GET /healthz.
class HttpService {
public:
    explicit HttpService(RunStore& store);
    ~HttpService();
    /// Binds 127.0.0.1:`port` (0 picks a free port), serves on a background
    /// thread and returns the bound port.
    int start(int port);
    void stop();
    /// Blocks until stop().
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};
/// CAUSAL_ATLAS_PORT, default 8765.
int service_port_from_env();

}  // namespace causal_atlas
