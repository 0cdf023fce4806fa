#include <bit>
#include <random>

#include "doctest.h"
#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"
#include "qcg/strategy.hpp"

using namespace qcg;

namespace {

Graph path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph cycle(int n) {
    Graph g = path(n);
    g.add_edge(n - 1, 0);
    return g;
}

Graph petersen() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

// Every matching, by brute force over edges in index order.
void all_matchings(const Graph& g, int from, std::uint64_t used, std::vector<std::pair<int, int>>& cur,
                   std::vector<std::vector<std::pair<int, int>>>& out) {
    out.push_back(cur);
    const int n = static_cast<int>(g.size());
    for (int a = from; a < n; ++a) {
        if (used >> a & 1) continue;
        for (int b = a + 1; b < n; ++b) {
            if ((used >> b & 1) || !g.edge(a, b)) continue;
            cur.emplace_back(a, b);
            all_matchings(g, a + 1, used | (1ull << a) | (1ull << b), cur, out);
            cur.pop_back();
        }
    }
}

std::vector<std::vector<std::pair<int, int>>> maximum_matchings(const Graph& g) {
    std::vector<std::vector<std::pair<int, int>>> all, best;
    std::vector<std::pair<int, int>> cur;
    all_matchings(g, 0, 0, cur, all);
    std::size_t m = 0;
    for (auto& x : all) m = std::max(m, x.size());
    for (auto& x : all)
        if (x.size() == m) best.push_back(x);
    return best;
}

bool brute_in_all(const Graph& g, int v) {
    for (auto& m : maximum_matchings(g)) {
        bool hit = false;
        for (auto [a, b] : m) hit = hit || a == v || b == v;
        if (!hit) return false;
    }
    return true;
}

bool brute_edge_some(const Graph& g, int a, int b) {
    for (auto& m : maximum_matchings(g))
        for (auto [x, y] : m)
            if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

std::shared_ptr<Geography> ug(const Graph& g, int start) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < g.size(); ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    return std::make_shared<Geography>(names, false, std::vector<Geography::Board>{{"main", g.adj}}, start, 0);
}

}  // namespace

TEST_CASE("maximum matching sizes") {
    Graph k3(3);
    k3.add_edge(0, 1);
    k3.add_edge(1, 2);
    k3.add_edge(0, 2);
    CHECK(max_matching(k3).size() == 1);
    auto m = max_matching(path(4));
    CHECK(m.size() == 2);
    CHECK(m.pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(max_matching(petersen()).size() == 5);
    CHECK(maximum_matchings(petersen()).front().size() == 5);
}

TEST_CASE("vertex and edge criteria") {
    CHECK(vertex_in_all_max_matchings(path(2), 0));
    CHECK(vertex_in_all_max_matchings(path(3), 1));
    CHECK_FALSE(vertex_in_all_max_matchings(Graph(1), 0));
    CHECK(edge_in_some_max_matching(path(2), 0, 1));
    CHECK(edge_in_some_max_matching(path(3), 0, 1));
    Graph star(4);
    for (int i = 1; i < 4; ++i) star.add_edge(0, i);
    CHECK(edge_in_some_max_matching(star, 0, 1));
    Graph tp(4);  // triangle 0-1-2 with pendant 3 on 2
    tp.add_edge(0, 1);
    tp.add_edge(1, 2);
    tp.add_edge(0, 2);
    tp.add_edge(2, 3);
    CHECK(edge_in_some_max_matching(tp, 2, 3));
}

TEST_CASE("matching criteria agree with enumeration on random graphs") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng() % 7);
        Graph g(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng() % 2) g.add_edge(a, b);
        CHECK(max_matching(g).size() == maximum_matchings(g).front().size());
        for (int v = 0; v < n; ++v) CHECK(vertex_in_all_max_matchings(g, v) == brute_in_all(g, v));
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (g.edge(a, b)) CHECK(edge_in_some_max_matching(g, a, b) == brute_edge_some(g, a, b));
    }
}

TEST_CASE("classical undirected geography outcome") {
    CHECK(classical_ug_outcome(path(2), 0) == Outcome::N);
    CHECK(classical_ug_outcome(path(3), 1) == Outcome::N);
    CHECK(classical_ug_outcome(path(3), 0) == Outcome::P);
    for (int s = 0; s < 4; ++s) CHECK(classical_ug_outcome(cycle(4), s) == Outcome::N);
    for (int s = 0; s < 4; ++s) {
        auto rs = ug(cycle(4), s);
        CHECK(classical_solve(rs, rs->start().front()) == classical_ug_outcome(cycle(4), s));
    }
}

TEST_CASE("hero openings") {
    CHECK(hero_first_move(path(2), 0, 0) == 1);
    CHECK(hero_first_move(path(3), 1, 0) == 0);
    Graph star(4);
    for (int i = 1; i < 4; ++i) star.add_edge(0, i);
    CHECK(hero_first_move(star, 0, 0) == 1);
    CHECK_THROWS_AS(hero_first_move(path(3), 0, 0), Error);
}

TEST_CASE("hero session on a path") {
    GameConfig cfg;
    auto h = HeroSession::begin(ug(path(4), 1), cfg);
    CHECK(h.hero() == Player::Left);
    CHECK(Geography::destination(h.first_move()) == 0);
    CHECK(is_terminal(h.state()));
}
