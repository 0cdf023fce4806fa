#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcg/ruleset.hpp"

namespace qcg {

// Graph-based rulesets store adjacency as 64-bit masks.
inline constexpr std::size_t kMaxVertices = 64;

class Nim final : public Ruleset {
public:
    explicit Nim(std::vector<std::uint32_t> piles);

    std::string kind() const override { return "nim"; }
    bool impartial() const override { return true; }
    void moves(const Position& p, Player h, std::vector<Label>& out) const override;
    std::optional<Position> apply(const Position& p, const Label& m, Player h) const override;
    std::vector<Position> start() const override { return {encode(piles_)}; }
    json instance_json() const override;
    json position_to_json(const Position& p) const override;
    Position position_from_json(const json& j) const override;
    json label_to_json(const Label& m) const override;
    Label label_from_json(const json& j) const override;
    std::string label_text(const Label& m) const override;
    std::string position_text(const Position& p) const override;

    std::size_t pile_count() const noexcept { return piles_.size(); }
    static Position encode(const std::vector<std::uint32_t>& piles);
    static std::vector<std::uint32_t> decode(const Position& p);
    static Label move(std::size_t pile, std::uint32_t take);
    static std::pair<std::size_t, std::uint32_t> decode_move(const Label& m);

private:
    std::vector<std::uint32_t> piles_;
};

class Geography final : public Ruleset {
public:
    struct Board {
        std::string name;
        std::vector<std::uint64_t> adj;  // adj[v] bit u set iff v -> u
    };
    struct State {
        int board = 0;
        int token = 0;
        std::uint64_t visited = 0;
    };

    Geography(std::vector<std::string> vertices, bool directed, std::vector<Board> boards, int start,
              std::uint64_t visited);

    std::string kind() const override { return "geography"; }
    bool impartial() const override { return true; }
    void moves(const Position& p, Player h, std::vector<Label>& out) const override;
    std::optional<Position> apply(const Position& p, const Label& m, Player h) const override;
    std::vector<Position> start() const override;
    json instance_json() const override;
    json position_to_json(const Position& p) const override;
    Position position_from_json(const json& j) const override;
    json label_to_json(const Label& m) const override;
    Label label_from_json(const json& j) const override;
    std::string label_text(const Label& m) const override;
    std::string position_text(const Position& p) const override;

    bool directed() const noexcept { return directed_; }
    const std::vector<std::string>& vertices() const noexcept { return names_; }
    const std::vector<Board>& boards() const noexcept { return boards_; }
    int start_vertex() const noexcept { return start_; }
    std::uint64_t start_visited() const noexcept { return visited_; }
    int vertex_id(const std::string& name) const;

    static Position encode(const State& s);
    static State decode(const Position& p);
    static Label move_to(int v);
    static int destination(const Label& m);

private:
    std::vector<std::string> names_;
    bool directed_;
    std::vector<Board> boards_;
    int start_;
    std::uint64_t visited_;
};

enum class KaylesVariant : std::uint8_t { Plain, Bigraph, Snort };
// Blue belongs to Left, Red to Right.
enum class Color : std::uint8_t { Blue, Red };

class NodeKayles final : public Ruleset {
public:
    struct State {
        std::uint64_t blue = 0;  // tokens; plain and bigraph store every token here
        std::uint64_t red = 0;
    };

    // colors: per-vertex colors for Bigraph; ignored otherwise.
    NodeKayles(std::vector<std::string> vertices, std::vector<std::uint64_t> adj, KaylesVariant variant,
               std::vector<Color> colors, State initial);

    std::string kind() const override { return "node_kayles"; }
    bool impartial() const override { return variant_ == KaylesVariant::Plain; }
    void moves(const Position& p, Player h, std::vector<Label>& out) const override;
    std::optional<Position> apply(const Position& p, const Label& m, Player h) const override;
    std::vector<Position> start() const override { return {encode(initial_)}; }
    json instance_json() const override;
    json position_to_json(const Position& p) const override;
    Position position_from_json(const json& j) const override;
    json label_to_json(const Label& m) const override;
    Label label_from_json(const json& j) const override;
    std::string label_text(const Label& m) const override;

    KaylesVariant variant() const noexcept { return variant_; }
    const std::vector<std::string>& vertices() const noexcept { return names_; }
    const std::vector<std::uint64_t>& adjacency() const noexcept { return adj_; }
    const std::vector<Color>& colors() const noexcept { return colors_; }
    const State& initial() const noexcept { return initial_; }
    int vertex_id(const std::string& name) const;
    bool playable(const State& s, int v, Player h) const;

    Position encode(const State& s) const;
    State decode(const Position& p) const;
    static Label place(int v);
    static int vertex_of(const Label& m);

private:
    std::vector<std::string> names_;
    std::vector<std::uint64_t> adj_;
    KaylesVariant variant_;
    std::vector<Color> colors_;
    State initial_;
};

class AvoidTrue final : public Ruleset {
public:
    AvoidTrue(std::vector<std::string> variables, std::vector<std::uint64_t> clauses, std::uint64_t free);

    std::string kind() const override { return "avoid_true"; }
    bool impartial() const override { return true; }
    void moves(const Position& p, Player h, std::vector<Label>& out) const override;
    std::optional<Position> apply(const Position& p, const Label& m, Player h) const override;
    std::vector<Position> start() const override { return {encode(free_)}; }
    json instance_json() const override;
    json position_to_json(const Position& p) const override;
    Position position_from_json(const json& j) const override;
    json label_to_json(const Label& m) const override;
    Label label_from_json(const json& j) const override;
    std::string label_text(const Label& m) const override;

    const std::vector<std::string>& variables() const noexcept { return names_; }
    const std::vector<std::uint64_t>& clauses() const noexcept { return clauses_; }
    std::uint64_t initial_free() const noexcept { return free_; }
    int variable_id(const std::string& name) const;
    bool has_active_clause(std::uint64_t free) const;

    static Position encode(std::uint64_t free);
    static std::uint64_t decode(const Position& p);
    static Label choose(int var);
    static int variable_of(const Label& m);

private:
    std::vector<std::string> names_;
    std::vector<std::uint64_t> clauses_;
    std::uint64_t free_;
};

enum class QbfFamily : std::uint8_t { Qbf, Qsat };
enum class QbfVariant : std::uint8_t { Phantom, ClauseSelector, LiteralSelector, Tko, Ko, Haymaker };

std::string to_string(QbfVariant v);
std::optional<QbfVariant> parse_qbf_variant(std::string_view s);

struct Literal {
    int var = 0;
    bool neg = false;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Left is the True player, Right the False player. Variables are indexed
// True's first, then False's.
class Qbf final : public Ruleset {
public:
    enum class Kind : std::uint8_t { Assign = 0, Phantom = 1, Clause = 2, Literal = 3, End = 4 };
    static constexpr std::uint16_t kNone = 0xffff;

    struct State {
        std::vector<std::uint8_t> value;  // 0 unassigned, 1 false, 2 true
        bool over = false;                 // phantom, declaration, blow or claim taken
        std::uint16_t clause = kNone;      // selector variants
        bool literal_done = false;
    };
    struct MoveLabel {
        Kind kind = Kind::Assign;
        std::uint16_t a = 0;  // variable, clause or literal index
        bool value = false;
        bool declare = false;
    };

    Qbf(QbfFamily family, QbfVariant variant, std::vector<std::string> true_vars,
        std::vector<std::string> false_vars, std::vector<std::vector<Literal>> clauses, bool merged_phantom = false);

    std::string kind() const override { return "qbf"; }
    bool impartial() const override { return false; }
    void moves(const Position& p, Player h, std::vector<Label>& out) const override;
    std::optional<Position> apply(const Position& p, const Label& m, Player h) const override;
    std::vector<Position> start() const override;
    json instance_json() const override;
    json position_to_json(const Position& p) const override;
    Position position_from_json(const json& j) const override;
    json label_to_json(const Label& m) const override;
    Label label_from_json(const json& j) const override;
    std::string label_text(const Label& m) const override;

    QbfFamily family() const noexcept { return family_; }
    QbfVariant variant() const noexcept { return variant_; }
    bool merged_phantom() const noexcept { return merged_; }
    std::size_t true_count() const noexcept { return n_true_; }
    std::size_t var_count() const noexcept { return names_.size(); }
    const std::vector<std::string>& variable_names() const noexcept { return names_; }
    const std::vector<std::vector<Literal>>& clauses() const noexcept { return clauses_; }
    Player owner(int var) const { return static_cast<std::size_t>(var) < n_true_ ? Player::Left : Player::Right; }
    // Prescribed assignment order for the QBF family: T1, F1, T2, F2, ...
    const std::vector<int>& order() const noexcept { return order_; }

    bool true_wins(const State& s) const;
    bool false_wins(const State& s) const;
    bool wins(const State& s, Player h) const { return h == Player::Left ? true_wins(s) : false_wins(s); }

    Position encode(const State& s) const;
    State decode(const Position& p) const;
    static Label encode_move(const MoveLabel& m);
    static MoveLabel decode_move(const Label& m);

private:
    void assignment_moves(const State& s, Player h, std::vector<MoveLabel>& out) const;
    std::vector<MoveLabel> move_list(const State& s, Player h) const;

    QbfFamily family_;
    QbfVariant variant_;
    std::vector<std::string> names_;
    std::size_t n_true_;
    std::vector<std::vector<Literal>> clauses_;
    bool merged_;
    std::vector<int> order_;
};

// JSON instance loading. Malformed documents raise SchemaError, well-formed
// but inconsistent ones InvalidInstance.
RulesetPtr ruleset_from_json(const json& j);

struct GameSpec {
    RulesetPtr ruleset;
    Superposition start;
    Player to_move = Player::Left;
};

// Reads the instance plus optional "superposition" and "to_move" keys.
GameSpec game_from_json(const json& j);

json superposition_to_json(const Ruleset& rs, const Superposition& s);
Superposition superposition_from_json(const Ruleset& rs, const json& j);
json move_to_json(const Ruleset& rs, const Move& m);
Move move_from_json(const Ruleset& rs, const json& j);
std::string move_text(const Ruleset& rs, const Move& m);
GameConfig config_from_json(const json& j);
json config_to_json(const GameConfig& c);

}  // namespace qcg
