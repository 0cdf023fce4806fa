#include "qcg/core.hpp"

#include <algorithm>
#include <iterator>

#include "bytes.hpp"
#include "qcg/ruleset.hpp"

namespace qcg {

std::string to_string(Player p) { return p == Player::Left ? "Left" : "Right"; }

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::N: return "N";
        case Outcome::P: return "P";
        case Outcome::L: return "L";
        case Outcome::R: return "R";
    }
    return "?";
}

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::A: return "A";
        case Flavor::B: return "B";
        case Flavor::C: return "C";
        case Flavor::CPrime: return "C'";
        case Flavor::D: return "D";
    }
    return "?";
}

std::optional<Player> parse_player(std::string_view s) {
    if (s == "Left" || s == "left" || s == "L") return Player::Left;
    if (s == "Right" || s == "right" || s == "R") return Player::Right;
    return std::nullopt;
}

std::optional<Flavor> parse_flavor(std::string_view s) {
    if (s == "A" || s == "a") return Flavor::A;
    if (s == "B" || s == "b") return Flavor::B;
    if (s == "C" || s == "c") return Flavor::C;
    if (s == "C'" || s == "c'" || s == "CPrime" || s == "Cprime" || s == "cprime") return Flavor::CPrime;
    if (s == "D" || s == "d") return Flavor::D;
    return std::nullopt;
}

std::optional<Outcome> parse_outcome(std::string_view s) {
    if (s == "N") return Outcome::N;
    if (s == "P") return Outcome::P;
    if (s == "L") return Outcome::L;
    if (s == "R") return Outcome::R;
    return std::nullopt;
}

std::string to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::IllegalMove: return "IllegalMove";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
        case ErrorCode::ResourceExceeded: return "ResourceExceeded";
        case ErrorCode::HeightExceeded: return "HeightExceeded";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::InvalidInstance: return "InvalidInstance";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::UnsupportedShape: return "UnsupportedShape";
        case ErrorCode::InvariantBroken: return "InvariantBroken";
        case ErrorCode::NotWinnable: return "NotWinnable";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::NothingToUndo: return "NothingToUndo";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string reason, const std::string& detail)
    : std::runtime_error(to_string(code) + ": " + reason + (detail.empty() ? "" : " (" + detail + ")")),
      code_(code),
      reason_(std::move(reason)) {}

Error Error::with_index(std::size_t i) const {
    Error e(code_, reason_, "at move index " + std::to_string(i));
    e.index_ = i;
    return e;
}

Superposition::Superposition(Position p) { r_.push_back(std::move(p)); }

std::optional<Superposition> Superposition::from(std::vector<Position> ps) {
    if (ps.empty()) return std::nullopt;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    Superposition s;
    s.r_ = std::move(ps);
    return s;
}

std::optional<Superposition> filter(std::vector<std::optional<Position>> candidates) {
    std::vector<Position> live;
    live.reserve(candidates.size());
    for (auto& c : candidates)
        if (c) live.push_back(std::move(*c));
    return Superposition::from(std::move(live));
}

QuantumMove QuantumMove::make(std::vector<Label> components) {
    std::sort(components.begin(), components.end());
    if (std::adjacent_find(components.begin(), components.end()) != components.end())
        throw Error(ErrorCode::IllegalMove, "duplicate component");
    if (components.size() < 2) throw Error(ErrorCode::IllegalMove, "width");
    QuantumMove q;
    q.c_ = std::move(components);
    return q;
}

void GameConfig::validate() const {
    if (width < 2) throw Error(ErrorCode::InvalidConfig, "width must be at least 2");
    if (budget_left && *budget_left < 0) throw Error(ErrorCode::InvalidConfig, "negative budget");
    if (budget_right && *budget_right < 0) throw Error(ErrorCode::InvalidConfig, "negative budget");
    if (dimension_cap && *dimension_cap < 1) throw Error(ErrorCode::InvalidConfig, "dimension cap must be at least 1");
}

GameState make_state(RulesetPtr rs, Superposition board, Player to_move, GameConfig cfg) {
    cfg.validate();
    Budgets b{cfg.budget_left, cfg.budget_right};
    return GameState{std::move(rs), std::move(board), to_move, cfg, b};
}

namespace {

std::vector<Position> merge_sorted(const std::vector<Position>& a, const std::vector<Position>& b) {
    std::vector<Position> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

Expansion::Expansion(const GameState& s) : s_(&s) {
    const Ruleset& rs = *s.ruleset;
    const Player h = s.to_move;
    std::vector<std::pair<Label, Position>> pairs;
    std::vector<Label> buf;
    for (const auto& r : s.board.realizations()) {
        buf.clear();
        rs.moves(r, h, buf);
        if (!buf.empty()) ++nonterminal_;
        for (auto& l : buf) {
            auto img = rs.apply(r, l, h);
            if (!img) throw Error(ErrorCode::InvariantBroken, "ruleset listed an infeasible move");
            pairs.emplace_back(std::move(l), std::move(*img));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        std::vector<Position> imgs;
        while (j < pairs.size() && pairs[j].first == pairs[i].first) {
            if (imgs.empty() || !(imgs.back() == pairs[j].second)) imgs.push_back(pairs[j].second);
            ++j;
        }
        universe_.push_back(pairs[i].first);
        counts_.push_back(j - i);
        images_.push_back(std::move(imgs));
        i = j;
    }
}

int Expansion::find(const Label& l) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), l);
    if (it == universe_.end() || !(*it == l)) return -1;
    return static_cast<int>(it - universe_.begin());
}

bool Expansion::quantum_allowed() const {
    const auto& s = *s_;
    if (s.config.demi) return false;
    auto b = s.budgets.of(s.to_move);
    return !b || *b > 0;
}

QuantumMoveEnumerator Expansion::quantum_moves() const {
    return QuantumMoveEnumerator(*this, s_->config.width, s_->config.dimension_cap, quantum_allowed());
}

bool Expansion::any_quantum() const {
    if (!any_quantum_) any_quantum_ = quantum_moves().next().has_value();
    return *any_quantum_;
}

std::vector<Label> Expansion::classical_moves() const {
    const auto& s = *s_;
    if (s.config.demi || s.config.flavor == Flavor::D) return universe_;
    std::vector<Label> out;
    switch (s.config.flavor) {
        case Flavor::A:
            break;
        case Flavor::B:
            if (!any_quantum()) out = universe_;
            break;
        case Flavor::C:
            for (std::size_t i = 0; i < universe_.size(); ++i)
                if (counts_[i] == s.board.width()) out.push_back(universe_[i]);
            break;
        case Flavor::CPrime:
            for (std::size_t i = 0; i < universe_.size(); ++i)
                if (counts_[i] == nonterminal_) out.push_back(universe_[i]);
            break;
        case Flavor::D:
            out = universe_;
            break;
    }
    return out;
}

bool Expansion::terminal() const { return classical_moves().empty() && !any_quantum(); }

GameState Expansion::classical_child(std::size_t i) const {
    const auto& s = *s_;
    auto board = Superposition::from(images_[i]);
    return GameState{s.ruleset, std::move(*board), opposite(s.to_move), s.config, s.budgets};
}

GameState Expansion::quantum_child(const std::vector<Position>& merged) const {
    const auto& s = *s_;
    auto board = Superposition::from(merged);
    Budgets b = s.budgets;
    if (auto& own = b.of(s.to_move)) *own -= 1;
    return GameState{s.ruleset, std::move(*board), opposite(s.to_move), s.config, b};
}

QuantumMoveEnumerator::QuantumMoveEnumerator(const Expansion& ex, int max_width, std::optional<int> cap,
                                             bool allowed)
    : ex_(&ex),
      n_(ex.universe().size()),
      kmax_(static_cast<std::size_t>(std::max(0, max_width))),
      cap_(cap),
      done_(!allowed) {}

bool QuantumMoveEnumerator::step() {
    if (!started_) {
        started_ = true;
        if (n_ < 2 || kmax_ < 2) return false;
        idx_.assign(1, 0);
        return true;
    }
    if (!skip_children_ && idx_.size() < kmax_ && idx_.back() + 1 < n_) {
        idx_.push_back(idx_.back() + 1);
        return true;
    }
    while (!idx_.empty()) {
        ++idx_.back();
        if (idx_.back() < n_) return true;
        idx_.pop_back();
    }
    return false;
}

std::optional<QuantumMoveEnumerator::Item> QuantumMoveEnumerator::next() {
    if (done_) return std::nullopt;
    while (step()) {
        const std::size_t d = idx_.size();
        unions_.resize(d);
        if (d == 1)
            unions_[0] = ex_->images(idx_[0]);
        else
            unions_[d - 1] = merge_sorted(unions_[d - 2], ex_->images(idx_[d - 1]));
        skip_children_ = cap_ && unions_[d - 1].size() > static_cast<std::size_t>(*cap_);
        if (skip_children_) continue;
        if (d >= 2) return Item{idx_, unions_[d - 1]};
    }
    done_ = true;
    return std::nullopt;
}

QuantumMove quantum_move_of(const Expansion& ex, const std::vector<std::size_t>& indices) {
    std::vector<Label> comps;
    comps.reserve(indices.size());
    for (auto i : indices) comps.push_back(ex.universe()[i]);
    return QuantumMove::make(std::move(comps));
}

std::vector<Label> legal_classical_moves(const GameState& s) { return Expansion(s).classical_moves(); }

std::vector<QuantumMove> legal_quantum_moves(const GameState& s, std::size_t limit) {
    Expansion ex(s);
    std::vector<QuantumMove> out;
    auto en = ex.quantum_moves();
    while (out.size() < limit) {
        auto it = en.next();
        if (!it) break;
        out.push_back(quantum_move_of(ex, it->indices));
    }
    return out;
}

std::vector<Move> legal_moves(const GameState& s, std::size_t quantum_limit) {
    Expansion ex(s);
    std::vector<Move> out;
    for (auto& l : ex.classical_moves()) out.emplace_back(l);
    auto en = ex.quantum_moves();
    for (std::size_t k = 0; k < quantum_limit; ++k) {
        auto it = en.next();
        if (!it) break;
        out.emplace_back(quantum_move_of(ex, it->indices));
    }
    return out;
}

bool is_terminal(const GameState& s) { return Expansion(s).terminal(); }

GameState apply_classical(const GameState& s, const Label& m) {
    Expansion ex(s);
    int i = ex.find(m);
    if (i < 0) throw Error(ErrorCode::IllegalMove, "infeasible");
    const auto idx = static_cast<std::size_t>(i);
    if (!s.config.demi) {
        switch (s.config.flavor) {
            case Flavor::A:
                throw Error(ErrorCode::IllegalMove, "classical-forbidden");
            case Flavor::B:
                if (ex.any_quantum()) throw Error(ErrorCode::IllegalMove, "quantum-available");
                break;
            case Flavor::C:
                if (ex.feasible_count(idx) != s.board.width()) throw Error(ErrorCode::IllegalMove, "unsafe");
                break;
            case Flavor::CPrime:
                if (ex.feasible_count(idx) != ex.nonterminal_count())
                    throw Error(ErrorCode::IllegalMove, "disrespectful");
                break;
            case Flavor::D:
                break;
        }
    }
    return ex.classical_child(idx);
}

GameState apply_quantum(const GameState& s, const QuantumMove& q) {
    if (q.width() < 2) throw Error(ErrorCode::IllegalMove, "width");
    if (q.width() > static_cast<std::size_t>(s.config.width)) throw Error(ErrorCode::IllegalMove, "width");
    if (s.config.demi) throw Error(ErrorCode::IllegalMove, "demi");
    if (auto b = s.budgets.of(s.to_move); b && *b <= 0) throw Error(ErrorCode::BudgetExhausted, "budget");
    Expansion ex(s);
    std::vector<Position> merged;
    for (const auto& c : q.components()) {
        int i = ex.find(c);
        if (i < 0) throw Error(ErrorCode::IllegalMove, "ineligible");
        merged = merge_sorted(merged, ex.images(static_cast<std::size_t>(i)));
    }
    if (s.config.dimension_cap && merged.size() > static_cast<std::size_t>(*s.config.dimension_cap))
        throw Error(ErrorCode::DimensionCapExceeded, "dimension cap");
    return ex.quantum_child(merged);
}

GameState apply_move(const GameState& s, const Move& m) {
    return m.quantum() ? apply_quantum(s, m.qmove()) : apply_classical(s, m.label());
}

GameState bft(RulesetPtr rs, const Superposition& start, const std::vector<MoveRecord>& moves,
              const GameConfig& cfg, Player first) {
    GameState st = make_state(std::move(rs), start, first, cfg);
    for (std::size_t i = 0; i < moves.size(); ++i) {
        if (moves[i].player != st.to_move) throw Error(ErrorCode::IllegalMove, "turn").with_index(i);
        try {
            st = apply_move(st, moves[i].move);
        } catch (const Error& e) {
            throw e.with_index(i);
        }
    }
    return st;
}

namespace {

void put_opt(std::string& k, const std::optional<int>& v) {
    bytes::put_u8(k, v ? 1 : 0);
    bytes::put_u32(k, v ? static_cast<std::uint32_t>(*v) : 0);
}

}  // namespace

bool effectively_impartial(const GameState& s) {
    return s.ruleset->impartial() && s.budgets.left == s.budgets.right;
}

std::string state_key(const GameState& s) {
    std::string k;
    const auto& c = s.config;
    bytes::put_u8(k, static_cast<std::uint8_t>(c.flavor));
    bytes::put_u16(k, static_cast<std::uint16_t>(c.width));
    put_opt(k, c.dimension_cap);
    bytes::put_u8(k, c.demi ? 1 : 0);
    if (s.ruleset->impartial()) {
        put_opt(k, s.budgets.of(s.to_move));
        put_opt(k, s.budgets.of(opposite(s.to_move)));
    } else {
        bytes::put_u8(k, static_cast<std::uint8_t>(s.to_move));
        put_opt(k, s.budgets.left);
        put_opt(k, s.budgets.right);
    }
    bytes::put_u32(k, static_cast<std::uint32_t>(s.board.width()));
    for (const auto& r : s.board.realizations()) bytes::put_blob(k, r.code);
    return k;
}

std::string canonical_key(const GameState& s) {
    std::string k;
    bytes::put_blob(k, s.ruleset->kind());
    bytes::put_blob(k, s.ruleset->instance_key());
    k += state_key(s);
    return k;
}

}  // namespace qcg
