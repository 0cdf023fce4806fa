#include <bit>
#include <random>

#include "doctest.h"
#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"

using namespace qcg;

namespace {

std::optional<Position> play(const Ruleset& rs, const Position& p, const Label& m, Player h = Player::Left) {
    return rs.apply(p, m, h);
}

std::vector<Label> moves_of(const Ruleset& rs, const Position& p, Player h = Player::Left) {
    std::vector<Label> out;
    rs.moves(p, h, out);
    return out;
}

ErrorCode load_error(const json& j) {
    try {
        ruleset_from_json(j);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::NotFound;
}

json pairs(std::initializer_list<std::pair<const char*, const char*>> es) {
    json a = json::array();
    for (const auto& [x, y] : es) a.push_back(json::array({x, y}));
    return a;
}

// Every reachable terminal position has the given loser to move.
bool loser_always_stuck(const GameState& s, Player loser) {
    auto moves = legal_moves(s, 32);
    if (moves.empty()) return s.to_move == loser;
    for (const auto& m : moves)
        if (!loser_always_stuck(apply_move(s, m), loser)) return false;
    return true;
}

}  // namespace

TEST_CASE("nim apply") {
    Nim nim({2, 2});
    CHECK(Nim::decode(*play(nim, Nim::encode({2, 2}), Nim::move(0, 1))) == std::vector<std::uint32_t>{1, 2});
    CHECK_FALSE(play(nim, Nim::encode({1, 0}), Nim::move(1, 1)));
    Nim n32({3, 2});
    CHECK(Nim::decode(*play(n32, Nim::encode({3, 2}), Nim::move(0, 3))) == std::vector<std::uint32_t>{0, 2});
    CHECK(moves_of(nim, Nim::encode({2, 2})).size() == 4);
}

TEST_CASE("geography apply") {
    auto g = ruleset_from_json(
        {{"ruleset", "geography"}, {"directed", false}, {"vertices", {"a", "b", "c"}},
         {"edges", pairs({{"a", "b"}, {"b", "c"}})}, {"start", "a"}});
    const auto& geo = static_cast<const Geography&>(*g);
    auto p = g->start().front();
    auto q = play(*g, p, Geography::move_to(1));
    REQUIRE(q);
    CHECK(Geography::decode(*q).token == 1);
    CHECK(Geography::decode(*q).visited == 0b011);
    CHECK_FALSE(play(*g, p, Geography::move_to(2)));
    // no way back into a visited vertex
    CHECK_FALSE(play(*g, *q, Geography::move_to(0)));
    CHECK(geo.boards().front().adj[1] == 0b101);
}

TEST_CASE("geography subdivided arc is a three-step path") {
    auto g = ruleset_from_json({{"ruleset", "geography"},
                                {"directed", true},
                                {"vertices", {"a", "ab1", "ab2", "b"}},
                                {"edges", pairs({{"a", "ab1"}, {"ab1", "ab2"}, {"ab2", "b"}})},
                                {"start", "a"}});
    auto p = g->start().front();
    for (int v : {1, 2, 3}) {
        auto q = play(*g, p, Geography::move_to(v));
        REQUIRE(q);
        p = *q;
    }
    CHECK(Geography::decode(p).visited == 0b1111);
    CHECK(moves_of(*g, p).empty());
}

TEST_CASE("node kayles variants") {
    NodeKayles tri({"x", "y", "z"}, {0b110, 0b101, 0b011}, KaylesVariant::Plain, {}, {});
    auto p = play(tri, tri.start().front(), NodeKayles::place(0));
    REQUIRE(p);
    CHECK(tri.decode(*p).blue == 0b001);
    CHECK_FALSE(play(tri, *p, NodeKayles::place(1)));

    NodeKayles bi({"u", "v"}, {0b10, 0b01}, KaylesVariant::Bigraph, {Color::Blue, Color::Red}, {});
    CHECK_FALSE(play(bi, bi.start().front(), NodeKayles::place(0), Player::Right));
    CHECK(play(bi, bi.start().front(), NodeKayles::place(1), Player::Right));
    CHECK_FALSE(bi.impartial());

    NodeKayles sn({"u", "v"}, {0b10, 0b01}, KaylesVariant::Snort, {}, {0, 0b01});
    CHECK_FALSE(play(sn, sn.start().front(), NodeKayles::place(1), Player::Left));
    // same colour next to its own token is fine
    auto r = play(sn, sn.start().front(), NodeKayles::place(1), Player::Right);
    REQUIRE(r);
    CHECK(sn.decode(*r).red == 0b11);
}

TEST_CASE("avoid true apply") {
    AvoidTrue one({"x1", "x2"}, {0b11}, 0b11);
    CHECK_FALSE(play(one, one.start().front(), AvoidTrue::choose(0)));

    AvoidTrue two({"x1", "x2", "x3"}, {0b011, 0b100}, 0b111);
    auto p = play(two, two.start().front(), AvoidTrue::choose(0));
    REQUIRE(p);
    CHECK(AvoidTrue::decode(*p) == 0b110);

    AvoidTrue five({"x1", "x2", "x3", "x4", "x5"}, {0b00111}, 0b11111);
    CHECK(play(five, five.start().front(), AvoidTrue::choose(3)));
    CHECK_FALSE(play(five, five.start().front(), AvoidTrue::choose(0)));
    CHECK_FALSE(play(five, AvoidTrue::encode(0b11011), AvoidTrue::choose(2)));
}

TEST_CASE("qbf variants") {
    auto lit = [](const char* v, bool neg = false) { return json{{"var", v}, {"neg", neg}}; };
    auto doc = [&](const char* variant, const char* family, json clauses) {
        return json{{"ruleset", "qbf"}, {"family", family}, {"variant", variant}, {"true_vars", {"x1"}},
                    {"false_vars", {"x2"}},  {"clauses", clauses}};
    };
    auto true_first_wins = [&](const json& j) {
        auto g = game_from_json(j);
        const Outcome o = classical_solve(g.ruleset, g.start.realizations().front());
        return o == Outcome::N || o == Outcome::L;
    };

    SUBCASE("phantom move") {
        auto g = ruleset_from_json(doc("phantom", "qbf", {{lit("x1"), lit("x2")}}));
        const auto& q = static_cast<const Qbf&>(*g);
        Qbf::State s = q.decode(g->start().front());
        s.value = {2, 1};
        auto labels = moves_of(q, q.encode(s), Player::Left);
        REQUIRE(labels.size() == 1);
        CHECK(Qbf::decode_move(labels[0]).kind == Qbf::Kind::Phantom);
        auto after = play(q, q.encode(s), labels[0]);
        REQUIRE(after);
        CHECK(moves_of(q, *after, Player::Right).empty());
        CHECK(moves_of(q, q.encode(s), Player::Right).empty());
    }

    SUBCASE("literal selector") {
        auto g = ruleset_from_json({{"ruleset", "qbf"}, {"family", "qbf"}, {"variant", "literal_selector"},
                                    {"true_vars", {"x1", "x3"}}, {"false_vars", {"x2"}},
                                    {"clauses", {{lit("x1"), lit("x2", true)}}}});
        const auto& q = static_cast<const Qbf&>(*g);
        Qbf::State s = q.decode(g->start().front());
        s.value = {2, 2, 1};  // x1, x3, x2
        auto sel = moves_of(q, q.encode(s), Player::Right);
        REQUIRE(sel.size() == 1);
        auto chosen = play(q, q.encode(s), sel[0], Player::Right);
        REQUIRE(chosen);
        auto lits = moves_of(q, *chosen, Player::Left);
        // x1 true and x2 false: both literals hold
        CHECK(lits.size() == 2);
        auto done = play(q, *chosen, lits[0], Player::Left);
        REQUIRE(done);
        CHECK(moves_of(q, *done, Player::Right).empty());
    }

    SUBCASE("clause selector needs True last") {
        CHECK(load_error(doc("clause_selector", "qbf", {{lit("x1")}})) == ErrorCode::UnsupportedShape);
    }

    SUBCASE("ko declares on a winning assignment") {
        auto g = ruleset_from_json(doc("ko", "qsat", {{lit("x1")}, {lit("x2")}}));
        const auto& q = static_cast<const Qbf&>(*g);
        Qbf::State s = q.decode(g->start().front());
        s.value = {2, 0};
        bool declared = false;
        for (const auto& m : moves_of(q, q.encode(s), Player::Right)) {
            auto mv = Qbf::decode_move(m);
            if (!mv.declare) continue;
            declared = true;
            CHECK_FALSE(mv.value);  // only x2=F falsifies (x2)
            auto after = play(q, q.encode(s), m, Player::Right);
            REQUIRE(after);
            CHECK(moves_of(q, *after, Player::Left).empty());
        }
        CHECK(declared);
    }

    SUBCASE("tko leaves only the winner an end move") {
        auto g = ruleset_from_json(doc("tko", "qsat", {{lit("x1")}}));
        const auto& q = static_cast<const Qbf&>(*g);
        Qbf::State s = q.decode(g->start().front());
        s.value = {1, 0};
        CHECK(moves_of(q, q.encode(s), Player::Left).empty());
        auto fm = moves_of(q, q.encode(s), Player::Right);
        REQUIRE(fm.size() == 1);
        CHECK(Qbf::decode_move(fm[0]).kind == Qbf::Kind::End);
    }

    SUBCASE("haymaker end blow") {
        auto g = ruleset_from_json(doc("haymaker", "qsat", {{lit("x1")}}));
        const auto& q = static_cast<const Qbf&>(*g);
        Qbf::State s = q.decode(g->start().front());
        s.value = {2, 0};
        bool end = false;
        for (const auto& m : moves_of(q, q.encode(s), Player::Left))
            end = end || Qbf::decode_move(m).kind == Qbf::Kind::End;
        CHECK(end);
    }

    SUBCASE("classical outcomes follow truth") {
        // exists x1 forall x2 (x1 or x2): true. With (x2) alone: false.
        CHECK(true_first_wins(doc("phantom", "qbf", {{lit("x1"), lit("x2")}})));
        CHECK_FALSE(true_first_wins(doc("phantom", "qbf", {{lit("x2")}})));
        CHECK_FALSE(ruleset_from_json(doc("phantom", "qbf", json::array()))->impartial());
    }
}

TEST_CASE("json loaders reject bad documents") {
    CHECK(load_error({{"ruleset", "chess"}}) == ErrorCode::SchemaError);
    CHECK(load_error({{"ruleset", "nim"}, {"piles", {1, -1}}}) == ErrorCode::InvalidInstance);
    CHECK(load_error({{"ruleset", "nim"}, {"piles", "x"}}) == ErrorCode::SchemaError);
    CHECK(load_error({{"ruleset", "geography"}, {"directed", true}, {"vertices", {"a"}},
                      {"edges", pairs({{"a", "a"}})}, {"start", "a"}}) == ErrorCode::InvalidInstance);
    CHECK(load_error({{"ruleset", "geography"}, {"directed", true}, {"vertices", {"a"}},
                      {"edges", json::array()}, {"start", "z"}}) == ErrorCode::InvalidInstance);
    CHECK(load_error({{"ruleset", "avoid_true"}, {"variables", {"x"}}, {"clauses", {json::array()}}}) ==
          ErrorCode::InvalidInstance);
    CHECK(load_error({{"ruleset", "node_kayles"}, {"variant", "bigraph"}, {"vertices", {"a"}},
                      {"edges", json::array()}}) == ErrorCode::InvalidInstance);
    CHECK(load_error({{"ruleset", "qbf"}, {"family", "qbf"}, {"variant", "nope"}, {"true_vars", {"a"}},
                      {"false_vars", json::array()}, {"clauses", json::array()}}) == ErrorCode::SchemaError);
}

TEST_CASE("instance json round trips") {
    const json docs[] = {
        {{"ruleset", "nim"}, {"piles", {2, 3}}},
        {{"ruleset", "geography"}, {"directed", true}, {"vertices", {"a", "b"}}, {"edges", pairs({{"a", "b"}})},
         {"start", "a"}, {"visited", {"a"}}},
        {{"ruleset", "node_kayles"}, {"variant", "bigraph"}, {"vertices", {"a", "b"}}, {"edges", pairs({{"a", "b"}})},
         {"colors", {{"a", "blue"}, {"b", "red"}}}, {"occupied", json::array()}},
        {{"ruleset", "avoid_true"}, {"variables", {"x", "y"}}, {"clauses", json::array({json::array({"x", "y"})})}},
    };
    for (const auto& d : docs) {
        auto a = ruleset_from_json(d);
        auto b = ruleset_from_json(a->instance_json());
        CHECK(a->instance_key() == b->instance_key());
        CHECK(a->start() == b->start());
    }
}

TEST_CASE("enumerated moves are exactly the feasible ones") {
    std::mt19937_64 r(3);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(r() % 5);
        std::vector<std::uint64_t> adj(n, 0);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (r() % 2) adj[a] |= std::uint64_t{1} << b, adj[b] |= std::uint64_t{1} << a;
        const std::vector<std::string> all{"a", "b", "c", "d", "e"};
        NodeKayles nk(std::vector<std::string>(all.begin(), all.begin() + n), adj, KaylesVariant::Plain, {}, {});
        NodeKayles::State s{r() % (std::uint64_t{1} << n)};
        bool independent = true;
        for (int v = 0; v < n; ++v)
            if (s.blue >> v & 1 && adj[v] & s.blue) independent = false;
        if (!independent) continue;
        const Position p = nk.encode(s);
        auto listed = moves_of(nk, p);
        std::vector<Label> scanned;
        for (int v = 0; v < n; ++v)
            if (play(nk, p, NodeKayles::place(v))) scanned.push_back(NodeKayles::place(v));
        CHECK(listed == scanned);
        CHECK(moves_of(nk, p, Player::Right) == listed);
    }
}

TEST_CASE("destiny rule matches exhaustive playouts") {
    std::mt19937_64 r(5);
    int decided = 0;
    for (int t = 0; t < 300; ++t) {
        const int n = 2 + static_cast<int>(r() % 4);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
        std::vector<std::uint64_t> clauses;
        const bool odd = r() % 2;
        for (int c = 0, k = 1 + static_cast<int>(r() % 2); c < k; ++c) {
            std::uint64_t m = 0;
            while (m == 0 || static_cast<bool>(std::popcount(m) & 1) != odd) m = r() % (1u << n);
            clauses.push_back(m);
        }
        auto at = std::make_shared<AvoidTrue>(names, clauses, (std::uint64_t{1} << n) - 1);
        const Superposition b(at->start().front());
        auto verdict = destiny_check(*at, b, Player::Left);
        if (!verdict) continue;
        ++decided;
        GameConfig cfg;
        CHECK(loser_always_stuck(make_state(at, b, Player::Left, cfg), opposite(*verdict)));
        cfg.demi = true;
        CHECK(loser_always_stuck(make_state(at, b, Player::Left, cfg), opposite(*verdict)));
    }
    CHECK(decided > 100);
}
