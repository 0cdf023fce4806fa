#pragma once

// Seeded random instance generators shared by the verification suites.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qcg/rulesets.hpp"
#include "qcg/strategy.hpp"

namespace qcg::gen {

using Rng = std::mt19937_64;

inline std::uint64_t below(Rng& r, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(r); }
inline int between(Rng& r, int lo, int hi) { return lo + static_cast<int>(below(r, static_cast<std::uint64_t>(hi - lo + 1))); }
inline bool coin(Rng& r, double p = 0.5) { return std::bernoulli_distribution(p)(r); }

inline std::vector<std::string> letters(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
    return out;
}

inline bool connected(const Graph& g) {
    if (g.size() == 0) return true;
    std::uint64_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) next |= g.adj[std::countr_zero(f)];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == g.all();
}

inline Graph random_graph(Rng& r, int n, double p) {
    Graph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(r, p)) g.add_edge(a, b);
    return g;
}

inline Graph connected_graph(Rng& r, int min_n, int max_n) {
    for (;;) {
        const int n = between(r, min_n, max_n);
        Graph g = random_graph(r, n, 0.25 + 0.5 * std::uniform_real_distribution<double>(0, 1)(r));
        if (connected(g)) return g;
    }
}

// Arcs as adjacency masks, adj[v] bit u iff v -> u.
inline std::vector<std::uint64_t> random_digraph(Rng& r, int n, int max_arcs) {
    std::vector<std::pair<int, int>> all;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) all.emplace_back(a, b);
    std::shuffle(all.begin(), all.end(), r);
    const int m = between(r, 0, std::min<int>(max_arcs, static_cast<int>(all.size())));
    std::vector<std::uint64_t> adj(n, 0);
    for (int i = 0; i < m; ++i) adj[all[i].first] |= std::uint64_t{1} << all[i].second;
    return adj;
}

// Acyclic: arcs only go from lower to higher index under a random relabeling.
inline std::vector<std::uint64_t> random_dag(Rng& r, int n, double p) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), r);
    std::vector<std::uint64_t> adj(n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(r, p)) adj[perm[a]] |= std::uint64_t{1} << perm[b];
    return adj;
}

inline std::shared_ptr<Geography> geography(const std::vector<std::uint64_t>& adj, bool directed, int start) {
    return std::make_shared<Geography>(letters(adj.size()), directed,
                                       std::vector<Geography::Board>{{"main", adj}}, start, 0);
}

// Positive CNF over n variables as clause masks, each clause nonempty.
inline std::vector<std::uint64_t> positive_cnf(Rng& r, int n, int max_clauses) {
    std::vector<std::uint64_t> out;
    const int m = between(r, 1, max_clauses);
    for (int i = 0; i < m; ++i) {
        std::uint64_t c = 0;
        while (!c) c = below(r, std::uint64_t{1} << n);
        out.push_back(c);
    }
    return out;
}

}  // namespace qcg::gen
