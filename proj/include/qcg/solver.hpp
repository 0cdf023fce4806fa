#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcg/core.hpp"
#include "qcg/ruleset.hpp"

namespace qcg {

class AvoidTrue;

struct SolveLimits {
    std::uint64_t max_nodes = 200'000'000;
    double max_seconds = 600.0;
    std::size_t max_table_entries = 8'000'000;
};

struct SolveResult {
    Outcome outcome = Outcome::P;
    std::optional<Move> best_move;  // for state.to_move, present iff it wins
    std::uint64_t nodes = 0;
    std::uint64_t table_hits = 0;
};

// Memoized negamax over quantum game states. The table is keyed by
// state_key and scoped to one ruleset instance; switching instances clears it.
class Solver {
public:
    explicit Solver(SolveLimits limits = {}, bool memoize = true);

    // True iff the player to move wins.
    bool wins(const GameState& s);
    // Canonically first winning move for the player to move.
    std::optional<Move> winning_move(const GameState& s);
    // Every winning move, canonical order.
    std::vector<Move> winning_moves(const GameState& s);
    SolveResult solve(const GameState& s);

    std::uint64_t nodes() const noexcept { return nodes_; }
    std::uint64_t table_hits() const noexcept { return hits_; }
    std::size_t table_size() const noexcept { return table_.size(); }
    void reset_counters();
    void clear();

private:
    bool search(const GameState& s);
    void bind(const GameState& s);
    void tick();
    void remember(std::string key, bool value);

    SolveLimits limits_;
    bool memoize_;
    const Ruleset* bound_ = nullptr;
    std::unordered_map<std::string, bool> table_;
    std::deque<const std::string*> order_;
    std::uint64_t nodes_ = 0;
    std::uint64_t hits_ = 0;
    std::chrono::steady_clock::time_point deadline_;
};

SolveResult solve(const GameState& s, const SolveLimits& limits = {});

// Outcome from the two first-player searches: (wins as Left first, wins as Right first).
Outcome outcome_of(bool left_first_wins, bool right_first_wins);

// Classical outcome of a classical position: no quantum moves.
Outcome classical_solve(RulesetPtr rs, const Position& p, const SolveLimits& limits = {});

Outcome nim_xor_outcome(const std::vector<std::uint32_t>& piles);

// Depth-first stream of the level-T realizations of the QP-tree built by
// applying moves to start. Duplicates may repeat. Returns false if the
// callback stopped the stream early.
template <class F>
bool qp_leaves(const Ruleset& rs, const Position& start, const std::vector<MoveRecord>& moves, F&& f);

// Outcome of bft(start, moves) computed by game-tree DFS over move
// sequences, re-streaming the QP-tree for every legality question.
Outcome solve_polyspace(RulesetPtr rs, const Position& start, const std::vector<MoveRecord>& moves,
                        const GameConfig& cfg, std::size_t height_bound, Player first = Player::Left);

// Whether the player to move wins, by the same method.
bool polyspace_wins(RulesetPtr rs, const Position& start, const std::vector<MoveRecord>& moves,
                    const GameConfig& cfg, std::size_t height_bound, Player to_move,
                    std::uint64_t* nodes = nullptr);

enum class Quantumness { Strong, Weak, None };
std::string to_string(Quantumness q);

struct QuantumnessReport {
    Quantumness kind = Quantumness::None;
    Outcome classical = Outcome::P;
    Outcome quantum = Outcome::P;
    // Witness for Weak: the classical board where the move sets are disjoint.
    std::optional<GameState> witness;
    std::vector<Label> classical_winning;
    std::vector<Label> quantum_winning;
};

QuantumnessReport classify_quantumness(RulesetPtr rs, const Position& p, const GameConfig& cfg,
                                       Player to_move = Player::Left, const SolveLimits& limits = {});

// Parity rule for positions produced by the Schaefer lift. Returns the
// player who wins under arbitrary play, if the rule decides it.
std::optional<Player> destiny_check(const AvoidTrue& rs, const Superposition& board, Player to_move);

// ---- implementation of the template ----

namespace detail {

template <class F>
bool qp_walk(const Ruleset& rs, const Position& p, const std::vector<MoveRecord>& moves, std::size_t depth, F& f) {
    if (depth == moves.size()) return f(p);
    const auto& rec = moves[depth];
    if (!rec.move.quantum()) {
        auto img = rs.apply(p, rec.move.label(), rec.player);
        return !img || qp_walk(rs, *img, moves, depth + 1, f);
    }
    for (const auto& c : rec.move.qmove().components()) {
        auto img = rs.apply(p, c, rec.player);
        if (img && !qp_walk(rs, *img, moves, depth + 1, f)) return false;
    }
    return true;
}

}  // namespace detail

template <class F>
bool qp_leaves(const Ruleset& rs, const Position& start, const std::vector<MoveRecord>& moves, F&& f) {
    return detail::qp_walk(rs, start, moves, 0, f);
}

}  // namespace qcg
