#include <atomic>
#include <string>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "qcg/qcg.h"

using json = nlohmann::json;

namespace {

template <class F>
std::pair<qcg_status, json> run(F f, const json& req) {
    char* out = nullptr;
    const qcg_status st = f(req.dump().c_str(), &out);
    REQUIRE(out != nullptr);
    json res = json::parse(out);
    qcg_free(out);
    return {st, res};
}

const json kNim22{{"ruleset", "nim"}, {"piles", {2, 2}}};

}  // namespace

TEST_CASE("solve through the C API") {
    auto [st, res] = run(qcg_solve, {{"game", kNim22}, {"config", {{"flavor", "D"}, {"width", 2}}}});
    CHECK(st == QCG_OK);
    CHECK(res["outcome"] == "N");
    CHECK(res["best_move_text"] == "<(-1,0)|(0,-1)>");

    auto [dst, demi] = run(qcg_solve, {{"game", kNim22}, {"config", {{"demi", true}}}});
    CHECK(dst == QCG_OK);
    CHECK(demi["outcome"] == "P");
    CHECK(demi["best_move"].is_null());

    // a supplied position replaces the instance start
    json state{{"superposition", json::array({json::array({1, 2}), json::array({2, 1})})}, {"to_move", "Right"}};
    auto [sst, sres] = run(qcg_solve, {{"game", kNim22}, {"state", state}});
    CHECK(sst == QCG_OK);
    CHECK(sres["to_move"] == "Right");
}

TEST_CASE("C API error statuses") {
    CHECK(run(qcg_solve, {{"game", kNim22}, {"config", {{"flavor", "E"}}}}).first == QCG_INPUT);
    CHECK(run(qcg_solve, json::object()).first == QCG_INPUT);
    auto [st, res] = run(qcg_solve, {{"game", {{"ruleset", "nim"}, {"piles", {6, 6, 6}}}}, {"limits", {{"max_nodes", 5}}}});
    CHECK(st == QCG_RESOURCE);
    CHECK(res["error"]["code"] == "ResourceExceeded");

    char* out = nullptr;
    CHECK(qcg_solve("{broken", &out) == QCG_INPUT);
    CHECK(json::parse(out)["error"]["code"] == "SchemaError");
    qcg_free(out);
    qcg_free(nullptr);
    CHECK(std::string(qcg_version()).size() > 0);
}

TEST_CASE("verify and reduce through the C API") {
    auto [st, res] = run(qcg_verify, {{"suite", "figures"}, {"seed", 7}});
    CHECK(st == QCG_OK);
    CHECK(res["passed"] == true);
    CHECK(run(qcg_verify, {{"suite", "no-such-suite"}}).first == QCG_INPUT);

    json path{{"ruleset", "geography"}, {"directed", true}, {"vertices", {"a", "b"}},
              {"edges", json::array({json::array({"a", "b"})})}, {"start", "a"}};
    auto [rst, red] = run(qcg_reduce, {{"kind", "edge-subdivide"}, {"input", path}});
    CHECK(rst == QCG_OK);
    CHECK(red["target"]["ruleset"] == "geography");
    CHECK(red["provenance"].is_object());
    CHECK(run(qcg_reduce, {{"kind", "nope"}, {"input", path}}).first == QCG_INPUT);
}

TEST_CASE("bench through the C API") {
    json req{{"instances",
              json::array({{{"name", "a"}, {"game", kNim22}},
                           {{"name", "b"}, {"game", {{"ruleset", "nim"}, {"piles", {7, 7, 7}}}}}})},
             {"limits", {{"max_nodes", 2000}}},
             {"jobs", 2}};
    auto [st, res] = run(qcg_bench, req);
    CHECK(st == QCG_OK);
    REQUIRE(res["rows"].size() == 2);
    CHECK(res["rows"][0]["status"] == "solved");
    CHECK(res["rows"][0]["outcome"] == "N");
    CHECK(res["rows"][1]["status"] == "exceeded");
    auto [est, empty] = run(qcg_bench, {{"instances", json::array()}});
    CHECK(est == QCG_OK);
    CHECK(empty["rows"].empty());
}

TEST_CASE("service lifecycle through the C API") {
    qcg_service* svc = nullptr;
    char* out = nullptr;
    REQUIRE(qcg_service_new(R"({"threads": 2, "engine_seconds": 1})", &svc, &out) == QCG_OK);
    qcg_free(out);
    CHECK(qcg_service_bind(svc, "127.0.0.1:notaport", &out) == QCG_INPUT);
    qcg_free(out);
    REQUIRE(qcg_service_bind(svc, "127.0.0.1:0", &out) == QCG_OK);
    const int port = json::parse(out)["port"];
    qcg_free(out);
    CHECK(port > 0);

    qcg_service* other = nullptr;
    REQUIRE(qcg_service_new("{}", &other, &out) == QCG_OK);
    qcg_free(out);
    const std::string taken = "127.0.0.1:" + std::to_string(port);
    CHECK(qcg_service_bind(other, taken.c_str(), &out) == QCG_FAILED);
    CHECK(json::parse(out)["error"]["code"] == "BindFailed");
    qcg_free(out);
    qcg_service_free(other);

    std::atomic<int> rc{-1};
    std::thread t([&] { rc = qcg_service_run(svc); });
    httplib::Client cli("127.0.0.1", port);
    auto h = cli.Get("/health");
    REQUIRE(h);
    CHECK(h->status == 200);
    qcg_service_stop(svc);
    t.join();
    CHECK(rc == QCG_OK);
    qcg_service_free(svc);
}
