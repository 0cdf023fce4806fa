#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcg {

enum class Player : std::uint8_t { Left = 0, Right = 1 };

constexpr Player opposite(Player p) noexcept {
    return p == Player::Left ? Player::Right : Player::Left;
}

enum class Outcome : std::uint8_t { N, P, L, R };

enum class Flavor : std::uint8_t { A, B, C, CPrime, D };

std::string to_string(Player p);
std::string to_string(Outcome o);
std::string to_string(Flavor f);
std::optional<Player> parse_player(std::string_view s);
std::optional<Flavor> parse_flavor(std::string_view s);
std::optional<Outcome> parse_outcome(std::string_view s);

enum class ErrorCode {
    IllegalMove,
    BudgetExhausted,
    DimensionCapExceeded,
    ResourceExceeded,
    HeightExceeded,
    SchemaError,
    InvalidInstance,
    InvalidConfig,
    UnsupportedShape,
    InvariantBroken,
    NotWinnable,
    NotFound,
    NothingToUndo,
};

std::string to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string reason, const std::string& detail = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& reason() const noexcept { return reason_; }
    std::optional<std::size_t> index() const noexcept { return index_; }
    Error with_index(std::size_t i) const;

private:
    ErrorCode code_;
    std::string reason_;
    std::optional<std::size_t> index_;
};

// Canonical byte encodings. std::string compares bytes as unsigned char,
// so the defaulted ordering is the codec's lexicographic order.
struct Position {
    std::string code;
    friend auto operator<=>(const Position&, const Position&) = default;
};

struct Label {
    std::string code;
    friend auto operator<=>(const Label&, const Label&) = default;
};

class Superposition {
public:
    explicit Superposition(Position p);

    // Sorts and deduplicates; nullopt when the list is empty.
    static std::optional<Superposition> from(std::vector<Position> ps);

    const std::vector<Position>& realizations() const noexcept { return r_; }
    std::size_t width() const noexcept { return r_.size(); }
    bool classical() const noexcept { return r_.size() == 1; }

    friend bool operator==(const Superposition&, const Superposition&) = default;

private:
    Superposition() = default;
    std::vector<Position> r_;
};

// Drops NULL candidates and duplicates. NULL iff every candidate is NULL.
std::optional<Superposition> filter(std::vector<std::optional<Position>> candidates);

class QuantumMove {
public:
    // Sorts the components; rejects fewer than two or repeated components.
    static QuantumMove make(std::vector<Label> components);

    const std::vector<Label>& components() const noexcept { return c_; }
    std::size_t width() const noexcept { return c_.size(); }

    friend auto operator<=>(const QuantumMove&, const QuantumMove&) = default;

private:
    std::vector<Label> c_;
};

// Classical moves order before quantum moves; each kind is lexicographic.
struct Move {
    std::variant<Label, QuantumMove> v;

    Move(Label l) : v(std::move(l)) {}
    Move(QuantumMove q) : v(std::move(q)) {}

    bool quantum() const noexcept { return v.index() == 1; }
    const Label& label() const { return std::get<Label>(v); }
    const QuantumMove& qmove() const { return std::get<QuantumMove>(v); }

    friend auto operator<=>(const Move&, const Move&) = default;
};

struct GameConfig {
    Flavor flavor = Flavor::D;
    int width = 2;
    std::optional<int> budget_left;
    std::optional<int> budget_right;
    std::optional<int> dimension_cap;
    bool demi = false;

    void validate() const;
    friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct Budgets {
    std::optional<int> left;
    std::optional<int> right;

    std::optional<int> of(Player p) const { return p == Player::Left ? left : right; }
    std::optional<int>& of(Player p) { return p == Player::Left ? left : right; }
    friend bool operator==(const Budgets&, const Budgets&) = default;
};

class Ruleset;
using RulesetPtr = std::shared_ptr<const Ruleset>;

struct GameState {
    RulesetPtr ruleset;
    Superposition board;
    Player to_move = Player::Left;
    GameConfig config;
    Budgets budgets;
};

GameState make_state(RulesetPtr rs, Superposition board, Player to_move, GameConfig cfg);

struct MoveRecord {
    Move move;
    Player player;
};

class QuantumMoveEnumerator;

// Per-state move generation. Caches, for each label in the component
// universe, the deduplicated set of realization images, so classical and
// quantum children are cheap to form.
class Expansion {
public:
    explicit Expansion(const GameState& s);

    const GameState& state() const noexcept { return *s_; }
    const std::vector<Label>& universe() const noexcept { return universe_; }

    std::vector<Label> classical_moves() const;
    bool quantum_allowed() const;
    QuantumMoveEnumerator quantum_moves() const;
    bool any_quantum() const;
    bool terminal() const;

    // Index into universe(), or -1.
    int find(const Label& l) const;
    const std::vector<Position>& images(std::size_t i) const { return images_[i]; }
    std::size_t feasible_count(std::size_t i) const { return counts_[i]; }
    std::size_t nonterminal_count() const noexcept { return nonterminal_; }

    // Children without legality checks; callers pass moves produced above.
    GameState classical_child(std::size_t i) const;
    GameState quantum_child(const std::vector<Position>& merged) const;

private:
    const GameState* s_;
    std::vector<Label> universe_;
    std::vector<std::vector<Position>> images_;
    std::vector<std::size_t> counts_;
    std::size_t nonterminal_ = 0;
    mutable std::optional<bool> any_quantum_;
};

class QuantumMoveEnumerator {
public:
    QuantumMoveEnumerator(const Expansion& ex, int max_width, std::optional<int> cap, bool allowed);

    struct Item {
        std::vector<std::size_t> indices;
        std::vector<Position> result;
    };

    // Next legal quantum move in lexicographic order of its components.
    std::optional<Item> next();

private:
    bool step();

    const Expansion* ex_;
    std::size_t n_;
    std::size_t kmax_;
    std::optional<int> cap_;
    bool done_;
    bool started_ = false;
    bool skip_children_ = false;
    std::vector<std::size_t> idx_;
    std::vector<std::vector<Position>> unions_;
};

QuantumMove quantum_move_of(const Expansion& ex, const std::vector<std::size_t>& indices);

std::vector<Label> legal_classical_moves(const GameState& s);
std::vector<QuantumMove> legal_quantum_moves(const GameState& s, std::size_t limit = SIZE_MAX);
bool is_terminal(const GameState& s);

GameState apply_classical(const GameState& s, const Label& m);
GameState apply_quantum(const GameState& s, const QuantumMove& q);
GameState apply_move(const GameState& s, const Move& m);

// All legal moves in canonical order (classical first).
std::vector<Move> legal_moves(const GameState& s, std::size_t quantum_limit = SIZE_MAX);

GameState bft(RulesetPtr rs, const Superposition& start, const std::vector<MoveRecord>& moves,
              const GameConfig& cfg, Player first = Player::Left);

// Impartial rulesets drop to_move and store budgets as (mover, other).
std::string canonical_key(const GameState& s);
// canonical_key without the instance prefix, for tables scoped to one instance.
std::string state_key(const GameState& s);

bool effectively_impartial(const GameState& s);

}  // namespace qcg
