#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "qcg/core.hpp"

namespace qcg {

class Geography;

// Simple undirected graph on at most 64 vertices.
struct Graph {
    std::vector<std::uint64_t> adj;

    explicit Graph(std::size_t n = 0) : adj(n, 0) {}
    std::size_t size() const noexcept { return adj.size(); }
    std::uint64_t all() const noexcept { return adj.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << adj.size()) - 1; }
    bool edge(int a, int b) const { return adj[a] >> b & 1; }
    void add_edge(int a, int b) {
        adj[a] |= std::uint64_t{1} << b;
        adj[b] |= std::uint64_t{1} << a;
    }
};

struct Matching {
    std::vector<std::pair<int, int>> pairs;  // a < b, sorted
    std::vector<int> mate;                   // -1 when unmatched
    std::size_t size() const noexcept { return pairs.size(); }
};

// Maximum matching of the subgraph induced by `alive` (Edmonds' blossom algorithm).
Matching max_matching(const Graph& g, std::uint64_t alive);
inline Matching max_matching(const Graph& g) { return max_matching(g, g.all()); }
std::size_t matching_size(const Graph& g, std::uint64_t alive);

bool vertex_in_all_max_matchings(const Graph& g, int v, std::uint64_t alive);
inline bool vertex_in_all_max_matchings(const Graph& g, int v) { return vertex_in_all_max_matchings(g, v, g.all()); }
bool edge_in_some_max_matching(const Graph& g, int a, int b, std::uint64_t alive);
inline bool edge_in_some_max_matching(const Graph& g, int a, int b) {
    return edge_in_some_max_matching(g, a, b, g.all());
}

// Classical Undirected Geography outcome with the token on start and
// `visited` (which includes start) already used.
Outcome classical_ug_outcome(const Graph& g, int start, std::uint64_t visited);
inline Outcome classical_ug_outcome(const Graph& g, int start) {
    return classical_ug_outcome(g, start, std::uint64_t{1} << start);
}

// Matched partner for the classical winner at start, canonical smallest.
int hero_first_move(const Graph& g, int start, std::uint64_t visited);

// The contraction-overlay strategy for Quantum Undirected Geography with a
// classical start, flavor D, width 2. The hero is the classical winner and
// always plays classically.
class HeroSession {
public:
    // Hero is whoever wins the classical game from the instance's start:
    // the first player (Left) when it is N, the second when it is P.
    static HeroSession begin(std::shared_ptr<const Geography> rs, const GameConfig& cfg);

    Player hero() const noexcept { return hero_; }
    const GameState& state() const noexcept { return state_; }
    const Geography& geography() const noexcept { return *rs_; }
    const Graph& graph() const noexcept { return g_; }
    // Partition classes of the overlay, as vertex masks.
    const std::vector<std::uint64_t>& classes() const noexcept { return classes_; }
    // Class holding the token's vertex after the hero's last move, or -1.
    int token_class() const noexcept { return token_; }

    // Overlay graph on the current classes; edges need all-pairs adjacency.
    Graph overlay() const;
    // A maximum matching of the overlay avoids the token class.
    bool invariant_holds() const;

    // Hero's opening when the hero moves first. Applies and returns it.
    Label first_move();
    // Applies the villain's move and the hero's reply; returns the reply.
    // Throws InvariantBroken when no reply keeps the invariant.
    Label respond(const Move& villain);

    // Moves made so far (both players).
    const std::vector<MoveRecord>& transcript() const noexcept { return transcript_; }

private:
    explicit HeroSession(GameState s) : state_(std::move(s)) {}
    int class_of(int v) const;
    void remove_class(int k);
    bool invariant_without(const std::vector<std::uint64_t>& classes, int token) const;
    Label play(int x);

    std::shared_ptr<const Geography> rs_;
    Graph g_;
    GameState state_;
    Player hero_ = Player::Left;
    std::vector<std::uint64_t> classes_;
    int token_ = -1;
    std::vector<MoveRecord> transcript_;
};

// Graph of a single-board undirected geography instance.
Graph geography_graph(const Geography& rs);

}  // namespace qcg
