#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "qcg/rulesets.hpp"
#include "qcg/service.hpp"
#include "qcg/strategy.hpp"

using namespace qcg;

namespace {

json nim(std::vector<int> piles) { return {{"ruleset", "nim"}, {"piles", piles}}; }

json game(const json& inst, const json& config = {{"flavor", "D"}, {"width", 2}}, json engine = nullptr) {
    return {{"instance", inst}, {"config", config}, {"engine_role", engine}};
}

std::string make(Service& svc, const json& body) {
    auto r = svc.create(body);
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

json quantum(std::vector<std::pair<int, int>> comps) {
    json a = json::array();
    for (auto [p, t] : comps) a.push_back({{"pile", p}, {"take", t}});
    return {{"quantum", a}};
}

json classical(int pile, int take) { return {{"classical", {{"pile", pile}, {"take", take}}}}; }

json undirected(const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& edges,
                const std::string& start) {
    json e = json::array();
    for (auto [a, b] : edges) e.push_back(json::array({names[a], names[b]}));
    return {{"ruleset", "geography"}, {"directed", false}, {"vertices", names}, {"edges", e}, {"start", start}};
}

}  // namespace

TEST_CASE("create and read a session") {
    Service svc;
    auto r = svc.create(game(nim({2, 2})));
    CHECK(r.status == 201);
    CHECK(r.body["width"] == 1);
    CHECK(r.body["to_move"] == "Left");
    CHECK(r.body["realizations"] == json::array({json::array({2, 2})}));
    CHECK(r.body["legal_moves"]["classical"] == 4);
    CHECK(r.body["legal_moves"]["quantum"] == 6);
    auto g = svc.get(r.body["id"]);
    CHECK(g.status == 200);
    CHECK(g.body["id"] == r.body["id"]);
    CHECK(svc.session_count() == 1);
    CHECK(svc.health().body["sessions"] == 1);
}

TEST_CASE("create rejects bad input") {
    Service svc;
    auto bad_flavor = svc.create(game(nim({2}), {{"flavor", "E"}}));
    CHECK(bad_flavor.status == 400);
    CHECK(bad_flavor.body["error"]["code"] == "SchemaError");
    auto bad_vertex = svc.create(game(undirected({"a", "b"}, {{0, 1}}, "zz")));
    CHECK(bad_vertex.status == 422);
    CHECK(svc.create(json::array()).status == 400);
    CHECK(svc.create(game(nim({2}), nullptr, "Middle")).status == 400);
    CHECK(svc.session_count() == 0);
}

TEST_CASE("quantum move splits the board") {
    Service svc;
    const auto id = make(svc, game(nim({2, 2})));
    auto r = svc.move(id, quantum({{0, 1}, {1, 1}}));
    REQUIRE(r.status == 200);
    CHECK(r.body["width"] == 2);
    CHECK(r.body["to_move"] == "Right");
    std::set<json> rz(r.body["realizations"].begin(), r.body["realizations"].end());
    CHECK(rz == std::set<json>{json::array({1, 2}), json::array({2, 1})});
}

TEST_CASE("move listing and paging") {
    Service svc;
    const auto id = make(svc, game(nim({2, 2})));
    auto q = svc.moves(id, "quantum", 0, 50);
    CHECK(q.body["total"] == 6);
    CHECK(q.body["moves"].size() == 6);
    for (const auto& m : q.body["moves"]) CHECK(m.contains("quantum"));
    auto small = svc.moves(id, "quantum", 1, 4);
    CHECK(small.body["moves"].size() == 2);
    CHECK(svc.moves(id, "quantum", 9, 4).body["moves"].empty());
    CHECK(svc.moves(id, "classical", 0, 10).body["total"] == 4);
    CHECK(svc.moves(id, "sideways", 0, 10).status == 400);
    // page size is clamped
    CHECK(svc.moves(id, "classical", 0, 100000).body["page_size"] == Service::kMaxMovePage);

    const auto a = make(svc, game(nim({2, 2}), {{"flavor", "A"}, {"width", 2}}));
    svc.move(a, quantum({{0, 1}, {1, 1}}));
    // superposed boards in flavor A only take quantum moves
    CHECK(svc.moves(a, "classical", 0, 10).body["moves"].empty());
    CHECK(svc.get(a).body["legal_moves"]["classical"] == 0);
}

TEST_CASE("illegal and unsafe moves conflict") {
    Service svc;
    const auto c = make(svc, game(nim({2, 2}), {{"flavor", "C"}, {"width", 2}}));
    REQUIRE(svc.move(c, quantum({{0, 1}, {0, 2}})).status == 200);
    // taking 2 from pile 0 is impossible in the realization where 2 was already taken
    auto unsafe = svc.move(c, classical(0, 2));
    CHECK(unsafe.status == 409);
    CHECK(unsafe.body["error"]["code"] == "IllegalMove");
    CHECK(svc.get(c).body["history"] == 1);

    const auto n = make(svc, game(nim({1})));
    CHECK(svc.move(n, classical(0, 5)).status == 409);
    CHECK(svc.move(n, classical(4, 1)).status == 422);
    REQUIRE(svc.move(n, classical(0, 1)).status == 200);
    CHECK(svc.get(n).body["terminal"] == true);
    auto t = svc.move(n, classical(0, 1));
    CHECK(t.status == 409);
    CHECK(t.body["error"]["reason"] == "terminal");
}

TEST_CASE("undo walks back to the start") {
    Service svc;
    const auto id = make(svc, game(nim({2, 2})));
    const json start = svc.get(id).body;
    const json after = svc.move(id, quantum({{0, 1}, {1, 1}})).body;
    svc.move(id, classical(0, 1));
    CHECK(svc.undo(id).body["realizations"] == after["realizations"]);
    auto back = svc.undo(id);
    CHECK(back.status == 200);
    CHECK(back.body["realizations"] == start["realizations"]);
    CHECK(back.body["to_move"] == "Left");
    auto none = svc.undo(id);
    CHECK(none.status == 409);
    CHECK(none.body["error"]["code"] == "NothingToUndo");
    CHECK(svc.move(id, quantum({{0, 1}, {1, 1}})).body["realizations"] == after["realizations"]);
}

TEST_CASE("analysis") {
    Service svc;
    auto a = svc.analysis(make(svc, game(nim({2, 2}))), 1'000'000, 10);
    CHECK(a.status == 200);
    CHECK(a.body["outcome"] == "N");
    CHECK(a.body["best"].contains("quantum"));
    CHECK(svc.analysis(make(svc, game(nim({3, 2}), json{{"flavor", "D"}, {"width", 2}, {"demi", true}})), 1'000'000,
                       10)
              .body["outcome"] == "N");
    auto p = svc.analysis(make(svc, game(nim({2, 2}), json{{"flavor", "D"}, {"width", 2}, {"demi", true}})),
                          1'000'000, 10);
    CHECK(p.body["outcome"] == "P");
    auto ex = svc.analysis(make(svc, game(nim({5, 5, 5}))), 3, 10);
    CHECK(ex.status == 202);
    CHECK(ex.body["status"] == "exceeded");
}

TEST_CASE("unknown session") {
    Service svc;
    CHECK(svc.get("nope").status == 404);
    CHECK(svc.move("nope", classical(0, 1)).status == 404);
    CHECK(svc.undo("nope").status == 404);
    CHECK(svc.analysis("nope", 10, 1).status == 404);
    CHECK(svc.moves("nope", "classical", 0, 1).body["error"]["code"] == "NotFound");
}

TEST_CASE("engine moves first and replies") {
    Service svc;
    auto r = svc.create(game(nim({2, 2}), {{"flavor", "D"}, {"width", 2}}, "Left"));
    REQUIRE(r.status == 201);
    REQUIRE(r.body.contains("engine"));
    CHECK(r.body["engine"]["winning"] == true);
    CHECK(r.body["engine"]["text"] == "<(-1,0)|(0,-1)>");
    CHECK(r.body["to_move"] == "Right");
    CHECK(r.body["history"] == 1);
    const std::string id = r.body["id"];
    // Right moves, the engine answers in the same response
    auto m = svc.moves(id, "classical", 0, 1).body["moves"][0];
    auto reply = svc.move(id, m);
    REQUIRE(reply.status == 200);
    CHECK(reply.body.contains("engine"));
    CHECK(reply.body["history"] == 3);
}

TEST_CASE("hero engine never loses undirected geography") {
    std::mt19937_64 rng(11);
    int games = 0, hero_replies = 0;
    for (int trial = 0; trial < 400 && games < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 100 < 45) edges.emplace_back(i, j);
        const json inst = undirected(names, edges, names[rng() % n]);
        auto g = std::static_pointer_cast<const Geography>(ruleset_from_json(inst));
        GameConfig cfg;
        cfg.flavor = Flavor::D;
        cfg.width = 2;
        Player hero;
        try {
            hero = HeroSession::begin(g, cfg).hero();
        } catch (const Error&) {
            continue;
        }
        Service svc({std::nullopt, std::nullopt, 2.0, 1});
        auto r = svc.create(game(inst, {{"flavor", "D"}, {"width", 2}}, to_string(hero)));
        REQUIRE(r.status == 201);
        const std::string id = r.body["id"];
        json view = r.body;
        if (view.contains("engine")) {
            CHECK(view["engine"]["strategy"] == "hero");
            ++hero_replies;
        }
        ++games;
        while (!view["terminal"].get<bool>()) {
            REQUIRE(view["to_move"] != to_string(hero));
            json c = svc.moves(id, "classical", 0, Service::kMaxMovePage).body["moves"];
            json q = svc.moves(id, "quantum", 0, Service::kMaxMovePage).body["moves"];
            for (auto& m : q) c.push_back(m);
            REQUIRE(!c.empty());
            view = svc.move(id, c[rng() % c.size()]).body;
            REQUIRE(view.contains("realizations"));
            if (view.contains("engine")) {
                CHECK(view["engine"]["strategy"] == "hero");
                ++hero_replies;
            }
        }
        // under normal play the side left without a move loses
        CHECK(view["to_move"] != to_string(hero));
    }
    CHECK(games >= 30);
    CHECK(hero_replies > games);
}

TEST_CASE("snapshot save and reload") {
    const auto path = (std::filesystem::temp_directory_path() / "qcg_snapshot_test.json").string();
    std::remove(path.c_str());
    std::string id;
    json before;
    {
        Service svc({path, std::nullopt, 1.0, 1});
        id = make(svc, game(nim({2, 3})));
        svc.move(id, quantum({{0, 1}, {1, 2}}));
        svc.move(id, classical(0, 1));
        before = svc.get(id).body;
        svc.save_snapshot();
    }
    Service again({path, std::nullopt, 1.0, 1});
    CHECK(again.session_count() == 1);
    auto after = again.get(id);
    REQUIRE(after.status == 200);
    CHECK(after.body["realizations"] == before["realizations"]);
    CHECK(after.body["history"] == 2);
    CHECK(after.body["to_move"] == before["to_move"]);
    CHECK(after.body["created"] == before["created"]);
    CHECK(again.undo(id).status == 200);
    std::remove(path.c_str());
}

TEST_CASE("listen address parsing") {
    CHECK(parse_listen("0.0.0.0:9000") == std::pair<std::string, int>{"0.0.0.0", 9000});
    CHECK(parse_listen("8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
    CHECK(parse_listen(":0").first == "127.0.0.1");
    CHECK_THROWS_AS(parse_listen("host:http"), Error);
    CHECK_THROWS_AS(parse_listen("host:70000"), Error);
}

TEST_CASE("live http round trip") {
    Service svc({std::nullopt, std::nullopt, 1.0, 2});
    REQUIRE(svc.bind("127.0.0.1", 0));
    REQUIRE(svc.port() > 0);
    std::thread t([&] { svc.run(); });
    httplib::Client cli("127.0.0.1", svc.port());
    auto h = cli.Get("/health");
    REQUIRE(h);
    CHECK(h->status == 200);
    auto c = cli.Post("/games", game(nim({2, 2})).dump(), "application/json");
    REQUIRE(c);
    CHECK(c->status == 201);
    const std::string id = json::parse(c->body)["id"];
    auto m = cli.Post("/games/" + id + "/move", quantum({{0, 1}, {1, 1}}).dump(), "application/json");
    REQUIRE(m);
    CHECK(json::parse(m->body)["width"] == 2);
    auto ms = cli.Get("/games/" + id + "/moves?kind=classical&page=0&page_size=2");
    REQUIRE(ms);
    CHECK(json::parse(ms->body)["moves"].size() == 2);
    auto an = cli.Get("/games/" + id + "/analysis?max_nodes=100000&max_seconds=5");
    REQUIRE(an);
    CHECK(an->status == 200);
    auto u = cli.Post("/games/" + id + "/undo", "", "application/json");
    REQUIRE(u);
    CHECK(json::parse(u->body)["width"] == 1);
    auto bad = cli.Post("/games", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    auto missing = cli.Get("/games/zzz");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    Service other;
    CHECK_FALSE(other.bind("127.0.0.1", svc.port()));
    svc.stop();
    t.join();
}
