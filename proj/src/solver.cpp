#include "qcg/solver.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include "qcg/rulesets.hpp"

namespace qcg {

Solver::Solver(SolveLimits limits, bool memoize) : limits_(limits), memoize_(memoize) {
    reset_counters();
}

void Solver::reset_counters() {
    nodes_ = 0;
    hits_ = 0;
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(limits_.max_seconds));
}

void Solver::clear() {
    table_.clear();
    order_.clear();
    bound_ = nullptr;
}

void Solver::bind(const GameState& s) {
    if (bound_ != s.ruleset.get()) {
        table_.clear();
        order_.clear();
        bound_ = s.ruleset.get();
    }
}

void Solver::tick() {
    ++nodes_;
    if (nodes_ > limits_.max_nodes) throw Error(ErrorCode::ResourceExceeded, "node limit");
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)
        throw Error(ErrorCode::ResourceExceeded, "time limit");
}

void Solver::remember(std::string key, bool value) {
    if (!memoize_ || limits_.max_table_entries == 0) return;
    while (table_.size() >= limits_.max_table_entries && !order_.empty()) {
        auto it = table_.find(*order_.front());
        order_.pop_front();
        if (it != table_.end()) table_.erase(it);
    }
    auto [it, fresh] = table_.emplace(std::move(key), value);
    if (fresh) order_.push_back(&it->first);
}

bool Solver::search(const GameState& s) {
    tick();
    std::string key;
    if (memoize_) {
        key = state_key(s);
        if (auto it = table_.find(key); it != table_.end()) {
            ++hits_;
            return it->second;
        }
    }
    Expansion ex(s);
    bool win = false;
    for (const auto& l : ex.classical_moves()) {
        if (!search(ex.classical_child(static_cast<std::size_t>(ex.find(l))))) {
            win = true;
            break;
        }
    }
    if (!win) {
        auto en = ex.quantum_moves();
        while (auto it = en.next()) {
            if (!search(ex.quantum_child(it->result))) {
                win = true;
                break;
            }
        }
    }
    remember(std::move(key), win);
    return win;
}

bool Solver::wins(const GameState& s) {
    bind(s);
    return search(s);
}

std::vector<Move> Solver::winning_moves(const GameState& s) {
    bind(s);
    Expansion ex(s);
    std::vector<Move> out;
    for (const auto& l : ex.classical_moves())
        if (!search(ex.classical_child(static_cast<std::size_t>(ex.find(l))))) out.emplace_back(l);
    auto en = ex.quantum_moves();
    while (auto it = en.next())
        if (!search(ex.quantum_child(it->result))) out.emplace_back(quantum_move_of(ex, it->indices));
    return out;
}

std::optional<Move> Solver::winning_move(const GameState& s) {
    bind(s);
    Expansion ex(s);
    for (const auto& l : ex.classical_moves())
        if (!search(ex.classical_child(static_cast<std::size_t>(ex.find(l))))) return Move(l);
    auto en = ex.quantum_moves();
    while (auto it = en.next())
        if (!search(ex.quantum_child(it->result))) return Move(quantum_move_of(ex, it->indices));
    return std::nullopt;
}

Outcome outcome_of(bool left_first_wins, bool right_first_wins) {
    if (left_first_wins && right_first_wins) return Outcome::N;
    if (!left_first_wins && !right_first_wins) return Outcome::P;
    return left_first_wins ? Outcome::L : Outcome::R;
}

SolveResult Solver::solve(const GameState& s) {
    reset_counters();
    SolveResult r;
    r.best_move = winning_move(s);
    const bool mover_wins = r.best_move.has_value();
    if (effectively_impartial(s)) {
        r.outcome = mover_wins ? Outcome::N : Outcome::P;
    } else {
        GameState other = s;
        other.to_move = opposite(s.to_move);
        const bool other_wins = wins(other);
        r.outcome = s.to_move == Player::Left ? outcome_of(mover_wins, other_wins) : outcome_of(other_wins, mover_wins);
    }
    r.nodes = nodes_;
    r.table_hits = hits_;
    return r;
}

SolveResult solve(const GameState& s, const SolveLimits& limits) {
    Solver solver(limits);
    return solver.solve(s);
}

Outcome classical_solve(RulesetPtr rs, const Position& p, const SolveLimits& limits) {
    GameConfig cfg;
    cfg.demi = true;
    auto s = make_state(std::move(rs), Superposition(p), Player::Left, cfg);
    return solve(s, limits).outcome;
}

Outcome nim_xor_outcome(const std::vector<std::uint32_t>& piles) {
    std::uint32_t x = 0;
    for (auto v : piles) x ^= v;
    return x ? Outcome::N : Outcome::P;
}

// ---- polynomial-space search ----

namespace {

class Polyspace {
public:
    Polyspace(const Ruleset& rs, Position start, std::vector<MoveRecord> path, GameConfig cfg, std::size_t height)
        : rs_(rs), start_(std::move(start)), path_(std::move(path)), cfg_(cfg), height_(height) {}

    bool wins(Player h, Budgets b);
    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    template <class F>
    bool leaves(F&& f) const {
        return qp_leaves(rs_, start_, path_, std::forward<F>(f));
    }

    std::optional<Label> next_label(Player h, const Label* after) const;
    bool feasible_everywhere(Player h, const Label& l, bool skip_terminal) const;
    // Distinct realizations produced by a quantum move, counted up to limit+1.
    std::size_t result_width(Player h, const std::vector<Label>& comps, std::size_t limit) const;
    bool quantum_allowed(Player h, const Budgets& b) const;
    bool any_quantum(Player h, const Budgets& b) const;
    bool classical_legal(Player h, const Budgets& b, const Label& l) const;
    bool try_child(Move m, Player h, Budgets b);

    // Next combination in DFS preorder over the universe; prefix unions
    // wider than the cap are not extended.
    bool next_combo(Player h, std::vector<Label>& c, bool extend) const;

    const Ruleset& rs_;
    Position start_;
    std::vector<MoveRecord> path_;
    GameConfig cfg_;
    std::size_t height_;
    std::uint64_t nodes_ = 0;
};

std::optional<Label> Polyspace::next_label(Player h, const Label* after) const {
    std::optional<Label> best;
    std::vector<Label> buf;
    leaves([&](const Position& p) {
        buf.clear();
        rs_.moves(p, h, buf);
        auto it = after ? std::upper_bound(buf.begin(), buf.end(), *after) : buf.begin();
        if (it != buf.end() && (!best || *it < *best)) best = *it;
        return true;
    });
    return best;
}

bool Polyspace::feasible_everywhere(Player h, const Label& l, bool skip_terminal) const {
    std::vector<Label> buf;
    return leaves([&](const Position& p) {
        buf.clear();
        rs_.moves(p, h, buf);
        if (skip_terminal && buf.empty()) return true;
        return std::binary_search(buf.begin(), buf.end(), l);
    });
}

std::size_t Polyspace::result_width(Player h, const std::vector<Label>& comps, std::size_t limit) const {
    std::set<Position> seen;
    leaves([&](const Position& p) {
        for (const auto& c : comps) {
            if (auto img = rs_.apply(p, c, h)) {
                seen.insert(std::move(*img));
                if (seen.size() > limit) return false;
            }
        }
        return true;
    });
    return seen.size();
}

bool Polyspace::quantum_allowed(Player h, const Budgets& b) const {
    if (cfg_.demi || cfg_.width < 2) return false;
    auto own = b.of(h);
    return !own || *own > 0;
}

bool Polyspace::next_combo(Player h, std::vector<Label>& c, bool extend) const {
    const auto kmax = static_cast<std::size_t>(cfg_.width);
    if (c.empty()) {
        auto f = next_label(h, nullptr);
        if (!f) return false;
        c.push_back(*f);
        return true;
    }
    if (extend && c.size() < kmax) {
        if (auto n = next_label(h, &c.back())) {
            c.push_back(*n);
            return true;
        }
    }
    while (!c.empty()) {
        if (auto n = next_label(h, &c.back())) {
            c.back() = *n;
            return true;
        }
        c.pop_back();
    }
    return false;
}

bool Polyspace::any_quantum(Player h, const Budgets& b) const {
    if (!quantum_allowed(h, b)) return false;
    auto first = next_label(h, nullptr);
    if (!first) return false;
    auto second = next_label(h, &*first);
    if (!second) return false;
    if (!cfg_.dimension_cap) return true;
    const auto cap = static_cast<std::size_t>(*cfg_.dimension_cap);
    std::vector<Label> c;
    bool extend = true;
    while (next_combo(h, c, extend)) {
        const bool fits = result_width(h, c, cap) <= cap;
        if (fits && c.size() >= 2) return true;
        extend = fits;
    }
    return false;
}

bool Polyspace::classical_legal(Player h, const Budgets& b, const Label& l) const {
    if (cfg_.demi) return true;
    switch (cfg_.flavor) {
        case Flavor::A: return false;
        case Flavor::B: return !any_quantum(h, b);
        case Flavor::C: return feasible_everywhere(h, l, false);
        case Flavor::CPrime: return feasible_everywhere(h, l, true);
        case Flavor::D: return true;
    }
    return false;
}

bool Polyspace::try_child(Move m, Player h, Budgets b) {
    if (path_.size() >= height_) throw Error(ErrorCode::HeightExceeded, "height bound");
    if (m.quantum())
        if (auto& own = b.of(h)) *own -= 1;
    path_.push_back(MoveRecord{std::move(m), h});
    bool opp_wins;
    try {
        opp_wins = wins(opposite(h), b);
    } catch (...) {
        path_.pop_back();
        throw;
    }
    path_.pop_back();
    return !opp_wins;
}

bool Polyspace::wins(Player h, Budgets b) {
    ++nodes_;
    bool b_checked = false, b_quantum = false;
    for (auto l = next_label(h, nullptr); l; l = next_label(h, &*l)) {
        bool legal;
        if (!cfg_.demi && cfg_.flavor == Flavor::B) {
            if (!b_checked) {
                b_quantum = any_quantum(h, b);
                b_checked = true;
            }
            legal = !b_quantum;
        } else {
            legal = classical_legal(h, b, *l);
        }
        if (legal && try_child(Move(*l), h, b)) return true;
    }
    if (!quantum_allowed(h, b)) return false;
    const std::size_t cap = cfg_.dimension_cap ? static_cast<std::size_t>(*cfg_.dimension_cap) : SIZE_MAX;
    std::vector<Label> c;
    bool extend = true;
    while (next_combo(h, c, extend)) {
        const bool fits = !cfg_.dimension_cap || result_width(h, c, cap) <= cap;
        extend = fits;
        if (!fits || c.size() < 2) continue;
        if (try_child(Move(QuantumMove::make(c)), h, b)) return true;
    }
    return false;
}

Budgets budgets_after(const GameConfig& cfg, const std::vector<MoveRecord>& moves) {
    Budgets b{cfg.budget_left, cfg.budget_right};
    for (const auto& m : moves)
        if (m.move.quantum())
            if (auto& own = b.of(m.player)) *own -= 1;
    return b;
}

}  // namespace

bool polyspace_wins(RulesetPtr rs, const Position& start, const std::vector<MoveRecord>& moves, const GameConfig& cfg,
                    std::size_t height_bound, Player to_move, std::uint64_t* nodes) {
    cfg.validate();
    Polyspace ps(*rs, start, moves, cfg, height_bound);
    bool w = ps.wins(to_move, budgets_after(cfg, moves));
    if (nodes) *nodes += ps.nodes();
    return w;
}

Outcome solve_polyspace(RulesetPtr rs, const Position& start, const std::vector<MoveRecord>& moves,
                        const GameConfig& cfg, std::size_t height_bound, Player first) {
    const Player mover = moves.empty() ? first : opposite(moves.back().player);
    const bool mover_wins = polyspace_wins(rs, start, moves, cfg, height_bound, mover);
    const Budgets b = budgets_after(cfg, moves);
    if (rs->impartial() && b.left == b.right) return mover_wins ? Outcome::N : Outcome::P;
    const bool other_wins = polyspace_wins(rs, start, moves, cfg, height_bound, opposite(mover));
    return mover == Player::Left ? outcome_of(mover_wins, other_wins) : outcome_of(other_wins, mover_wins);
}

// ---- quantumness ----

std::string to_string(Quantumness q) {
    switch (q) {
        case Quantumness::Strong: return "Strong";
        case Quantumness::Weak: return "Weak";
        case Quantumness::None: return "None";
    }
    return "?";
}

QuantumnessReport classify_quantumness(RulesetPtr rs, const Position& p, const GameConfig& cfg, Player to_move,
                                       const SolveLimits& limits) {
    QuantumnessReport rep;
    Solver solver(limits);
    GameConfig classical_cfg = cfg;
    classical_cfg.demi = true;
    auto root = make_state(rs, Superposition(p), to_move, cfg);
    auto croot = make_state(rs, Superposition(p), to_move, classical_cfg);
    rep.classical = solver.solve(croot).outcome;
    rep.quantum = solver.solve(root).outcome;
    if (rep.classical != rep.quantum) {
        rep.kind = Quantumness::Strong;
        return rep;
    }

    // Visit every state reachable under quantum play; at each 1-wide board
    // compare the mover's classically winning and quantumly winning labels.
    std::unordered_set<std::string> seen;
    std::vector<GameState> stack{root};
    seen.insert(state_key(root));
    while (!stack.empty()) {
        GameState s = std::move(stack.back());
        stack.pop_back();
        if (s.board.classical()) {
            GameState c = s;
            c.config = classical_cfg;
            std::vector<Label> cw, qw;
            Expansion cx(c);
            for (const auto& l : cx.classical_moves())
                if (!solver.wins(cx.classical_child(static_cast<std::size_t>(cx.find(l))))) cw.push_back(l);
            Expansion qx(s);
            for (const auto& l : qx.classical_moves())
                if (!solver.wins(qx.classical_child(static_cast<std::size_t>(qx.find(l))))) qw.push_back(l);
            std::vector<Label> common;
            std::set_intersection(cw.begin(), cw.end(), qw.begin(), qw.end(), std::back_inserter(common));
            if (!cw.empty() && !qw.empty() && common.empty()) {
                rep.kind = Quantumness::Weak;
                rep.witness = s;
                rep.classical_winning = std::move(cw);
                rep.quantum_winning = std::move(qw);
                return rep;
            }
        }
        Expansion ex(s);
        auto push = [&](GameState child) {
            if (seen.insert(state_key(child)).second) stack.push_back(std::move(child));
        };
        for (const auto& l : ex.classical_moves()) push(ex.classical_child(static_cast<std::size_t>(ex.find(l))));
        auto en = ex.quantum_moves();
        while (auto it = en.next()) push(ex.quantum_child(it->result));
        if (seen.size() > limits.max_table_entries) throw Error(ErrorCode::ResourceExceeded, "reachable-state limit");
    }
    return rep;
}

// ---- parity rule ----

std::optional<Player> destiny_check(const AvoidTrue& rs, const Superposition& board, Player to_move) {
    bool any = false, all_even = true, all_odd = true;
    int parity = -1;
    for (const auto& r : board.realizations()) {
        const std::uint64_t free = AvoidTrue::decode(r);
        const int fp = std::popcount(free) & 1;
        if (parity >= 0 && parity != fp) return std::nullopt;
        parity = fp;
        for (auto c : rs.clauses()) {
            if (c & ~free) continue;
            any = true;
            if (std::popcount(c) & 1)
                all_even = false;
            else
                all_odd = false;
        }
    }
    if (!any || (!all_even && !all_odd)) return std::nullopt;
    // With every active clause odd the player facing an even number of free
    // variables always has a move; with every clause even, the odd one does.
    const Player even_mover = parity == 0 ? to_move : opposite(to_move);
    return all_odd ? even_mover : opposite(even_mover);
}

}  // namespace qcg
