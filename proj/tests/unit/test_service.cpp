#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "causal_atlas/error.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/service.hpp"

#include <httplib.h>

using namespace causal_atlas;
namespace fs = std::filesystem;

namespace {

std::string chain_csv(Index n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> z;
    MatrixXd v(n, 4);
    for (Index r = 0; r < n; ++r) {
        v(r, 0) = z(rng);
        v(r, 1) = 0.9 * v(r, 0) + z(rng);
        v(r, 2) = -0.8 * v(r, 1) + z(rng);
        v(r, 3) = 0.7 * v(r, 2) + z(rng);
    }
    return write_csv(Dataset(v, {{"A"}, {"B"}, {"C"}, {"D"}}));
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("causal_atlas_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

nlohmann::json run_body(const std::string& csv) {
    return {{"csv", csv}, {"seed", 3}, {"bootstrap", 4}, {"algorithm", "notears_linear"}};
}

}  // namespace

TEST_CASE("service lifecycle over HTTP") {
    fs::path root = fresh_dir("service_http");
    RunStore store(root);
    HttpService http(store);
    int port = http.start(0);
    httplib::Client cli("127.0.0.1", port);

    auto health = cli.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(nlohmann::json::parse(health->body)["status"] == "ok");

    auto ragged = cli.Post("/runs", nlohmann::json{{"csv", "a,b\n1,2\n3\n"}}.dump(), "application/json");
    REQUIRE(ragged);
    CHECK(ragged->status == 400);
    CHECK(nlohmann::json::parse(ragged->body)["error"] == "MalformedCsv");

    std::string csv = chain_csv(600, 1);
    auto created = cli.Post("/runs", run_body(csv).dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    std::string id = nlohmann::json::parse(created->body)["id"];
    auto again = cli.Post("/runs", run_body(csv).dump(), "application/json");
    std::string id2 = nlohmann::json::parse(again->body)["id"];
    CHECK(id != id2);

    Phase ph = store.wait(id, 60);
    CHECK((ph == Phase::awaiting_review || ph == Phase::done));
    store.wait(id2, 60);

    auto snap = cli.Get("/runs/" + id);
    REQUIRE(snap);
    nlohmann::json s = nlohmann::json::parse(snap->body);
    CHECK(s["artifacts"].contains("profile"));
    CHECK(s["artifacts"].contains("graph"));
    CHECK(s["artifacts"]["graph"] == nlohmann::json::parse(slurp(root / id / "graph.json")));

    auto missing = cli.Get("/runs/run-9999");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    // forbid every edge the first pass found between A and B
    nlohmann::json forbid = {{"forbidden", nlohmann::json::array({nlohmann::json::array({"A", "B"}), nlohmann::json::array({"B", "A"})})}};
    auto sub = cli.Post("/runs/" + id + "/constraints", forbid.dump(), "application/json");
    REQUIRE(sub);
    CHECK(sub->status == 200);
    ph = store.wait(id, 60);
    CHECK((ph == Phase::awaiting_review || ph == Phase::done));
    nlohmann::json after = store.get_run(id);
    CHECK(after["constraints"].size() == 1);
    for (const auto& e : after["artifacts"]["graph"]["edges"])
        CHECK_FALSE(((e["from"] == "A" && e["to"] == "B") || (e["from"] == "B" && e["to"] == "A")));
    CHECK(fs::exists(root / id / "constraints-1.json"));

    nlohmann::json conflict = {{"required", nlohmann::json::array({nlohmann::json::array({"A", "B"})})}};
    auto bad = cli.Post("/runs/" + id + "/constraints", conflict.dump(), "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(nlohmann::json::parse(bad->body)["error"] == "ConflictingConstraints");
    CHECK(store.get_run(id)["constraints"].size() == 1);

    auto md = cli.Get("/runs/" + id + "/report?format=md");
    REQUIRE(md);
    CHECK(md->status == 200);
    CHECK(md->body == slurp(root / id / "report.md"));
    CHECK(store.phase(id) == Phase::done);
    auto js = cli.Get("/runs/" + id + "/report?format=json");
    REQUIRE(js);
    CHECK(nlohmann::json::parse(js->body)["selection"]["chosen"] == "notears_linear");
    auto badfmt = cli.Get("/runs/" + id + "/report?format=pdf");
    REQUIRE(badfmt);
    CHECK(badfmt->status == 400);
    http.stop();
}

TEST_CASE("a reopened store serves identical artifacts") {
    fs::path root = fresh_dir("service_reopen");
    std::string id;
    nlohmann::json snapshot;
    std::string report;
    {
        RunStore store(root);
        RunRequest r = run_request_from_json(run_body(chain_csv(400, 2)));
        id = store.create_run(r);
        store.wait(id, 60);
        report = store.report(id, ReportFormat::markdown);
        snapshot = store.get_run(id);
    }
    RunStore reopened(root);
    CHECK(reopened.get_run(id) == snapshot);
    CHECK(reopened.report(id, ReportFormat::markdown) == report);
    std::string next = reopened.create_run(run_request_from_json(run_body(chain_csv(300, 3))));
    CHECK(next != id);
    reopened.wait(next, 60);
}

TEST_CASE("constraints need a finished run") {
    fs::path root = fresh_dir("service_phase");
    RunStore store(root);
    nlohmann::json body = run_body(chain_csv(200, 4));
    body["config"] = {{"not_a_parameter", 1}};
    std::string id = store.create_run(run_request_from_json(body));
    CHECK(store.wait(id, 60) == Phase::failed);
    CHECK(store.get_run(id).contains("error"));
    try {
        store.submit_constraints(id, ConstraintSet{});
        FAIL("expected InvalidPhase");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidPhase);
    }
    CHECK_THROWS_AS(store.get_run("nope"), Error);
    CHECK_THROWS_AS(run_request_from_json({{"csv", "a\n1\n"}, {"colour", "red"}}), Error);
}
