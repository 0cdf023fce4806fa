#pragma once

#include <string>
#include <vector>

#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"

namespace qcg {

struct ReductionOutput {
    std::string kind;
    RulesetPtr ruleset;
    Superposition state;
    Player to_move = Player::Left;
    // Source entities (clauses, arcs, variables, vertices) to target entities.
    json provenance = json::object();

    GameState game(const GameConfig& cfg) const { return make_state(ruleset, state, to_move, cfg); }
};

// One Nim realization per active clause per source realization.
ReductionOutput avoid_true_to_nim(std::shared_ptr<const AvoidTrue> src, const Superposition& board);
// Every arc a->b becomes a->"a→b#1"->"a→b#2"->b.
ReductionOutput geography_edge_subdivision(const Geography& src);
// Directed instance to an undirected one with m+1 boards: main plus one per arc.
ReductionOutput directed_to_undirected_polywide(const Geography& src);
// Merged phantom-move QSAT with equal variable counts to Avoid True.
ReductionOutput schaefer_lift(const Qbf& src);
// Ordered QBF to Node Kayles; True must own the first and last variable,
// otherwise a padding variable is added first.
ReductionOutput qbf_to_node_kayles(const Qbf& src);
// Bigraph Node Kayles to Snort with two pre-placed anchors.
ReductionOutput bigraph_to_snort(const NodeKayles& src);
ReductionOutput identity_reduction(RulesetPtr rs, const Superposition& board, Player to_move = Player::Left);

// Adds a True variable and the clause (x or not x) when False would assign
// the last variable; returns the input unchanged otherwise.
std::shared_ptr<const Qbf> qbf_pad_last_true(const Qbf& src);
// Truth of the ordered formula (T1 F1 T2 F2 ...), by direct evaluation.
bool qbf_truth(const Qbf& q);

enum class Relation {
    SameOutcome,      // outcome classes must match
    FirstPlayerWins,  // only whether the player to move wins
};

struct ReductionReport {
    Outcome source = Outcome::P;
    Outcome target = Outcome::P;
    bool source_mover_wins = false;
    bool target_mover_wins = false;
    bool agree = false;
    std::uint64_t source_nodes = 0;
    std::uint64_t target_nodes = 0;

    json to_json() const;
};

// Solves both sides. A classical source is solved with quantum moves off.
ReductionReport verify_reduction(const GameState& source, const ReductionOutput& out, const GameConfig& cfg,
                                 const SolveLimits& limits = {}, Relation rel = Relation::SameOutcome,
                                 bool classical_source = false);

// CLI names: avoid-true-to-nim, edge-subdivide, directed-to-undirected,
// schaefer-lift, qbf-to-node-kayles, bigraph-to-snort.
const std::vector<std::string>& reduction_kinds();
// Input is a game document (instance plus optional superposition).
ReductionOutput reduce_json(const std::string& kind, const json& input);
// Target game document: instance, superposition and to_move.
json reduction_game_json(const ReductionOutput& out);

}  // namespace qcg
