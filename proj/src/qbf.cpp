#include <algorithm>

#include "bytes.hpp"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

std::string to_string(QbfVariant v) {
    switch (v) {
        case QbfVariant::Phantom: return "phantom";
        case QbfVariant::ClauseSelector: return "clause_selector";
        case QbfVariant::LiteralSelector: return "literal_selector";
        case QbfVariant::Tko: return "tko";
        case QbfVariant::Ko: return "ko";
        case QbfVariant::Haymaker: return "haymaker";
    }
    return "phantom";
}

std::optional<QbfVariant> parse_qbf_variant(std::string_view s) {
    for (auto v : {QbfVariant::Phantom, QbfVariant::ClauseSelector, QbfVariant::LiteralSelector, QbfVariant::Tko,
                   QbfVariant::Ko, QbfVariant::Haymaker})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

Qbf::Qbf(QbfFamily family, QbfVariant variant, std::vector<std::string> true_vars,
         std::vector<std::string> false_vars, std::vector<std::vector<Literal>> clauses, bool merged_phantom)
    : family_(family), variant_(variant), n_true_(true_vars.size()), clauses_(std::move(clauses)),
      merged_(merged_phantom && variant == QbfVariant::Phantom) {
    const std::size_t n_false = false_vars.size();
    names_ = std::move(true_vars);
    names_.insert(names_.end(), false_vars.begin(), false_vars.end());
    detail::check_names(names_, "variable", 0xfffe);
    if (n_true_ < n_false || n_true_ > n_false + 1)
        detail::invalid("True must own as many variables as False, or one more");
    if ((variant_ == QbfVariant::ClauseSelector || variant_ == QbfVariant::LiteralSelector) && n_true_ != n_false + 1)
        throw Error(ErrorCode::UnsupportedShape, "selector variants need True to assign the last variable");
    if (clauses_.size() >= kNone) detail::invalid("too many clauses");
    for (const auto& c : clauses_)
        for (const auto& l : c)
            if (l.var < 0 || static_cast<std::size_t>(l.var) >= names_.size())
                detail::invalid("clause references an unknown variable");
    for (std::size_t i = 0; i < n_true_; ++i) {
        order_.push_back(static_cast<int>(i));
        if (i < n_false) order_.push_back(static_cast<int>(n_true_ + i));
    }
    std::string k;
    bytes::put_u8(k, static_cast<std::uint8_t>(family_));
    bytes::put_u8(k, static_cast<std::uint8_t>(variant_));
    bytes::put_u8(k, merged_ ? 1 : 0);
    bytes::put_u16(k, static_cast<std::uint16_t>(n_true_));
    bytes::put_u16(k, static_cast<std::uint16_t>(names_.size()));
    bytes::put_u16(k, static_cast<std::uint16_t>(clauses_.size()));
    for (const auto& c : clauses_) {
        bytes::put_u16(k, static_cast<std::uint16_t>(c.size()));
        for (const auto& l : c) {
            bytes::put_u16(k, static_cast<std::uint16_t>(l.var));
            bytes::put_u8(k, l.neg ? 1 : 0);
        }
    }
    set_instance_key(k);
}

namespace {

// 0 unassigned, 1 false, 2 true
bool literal_true(const std::vector<std::uint8_t>& value, const Literal& l) {
    return value[l.var] == (l.neg ? 1 : 2);
}

bool literal_false(const std::vector<std::uint8_t>& value, const Literal& l) {
    return value[l.var] == (l.neg ? 2 : 1);
}

bool all_assigned(const std::vector<std::uint8_t>& value) {
    return std::none_of(value.begin(), value.end(), [](std::uint8_t v) { return v == 0; });
}

}  // namespace

bool Qbf::true_wins(const State& s) const {
    for (const auto& c : clauses_)
        if (std::none_of(c.begin(), c.end(), [&](const Literal& l) { return literal_true(s.value, l); }))
            return false;
    return true;
}

bool Qbf::false_wins(const State& s) const {
    for (const auto& c : clauses_)
        if (std::all_of(c.begin(), c.end(), [&](const Literal& l) { return literal_false(s.value, l); }))
            return true;
    return false;
}

Position Qbf::encode(const State& s) const {
    Position p;
    for (auto v : s.value) bytes::put_u8(p.code, v);
    bytes::put_u8(p.code, s.over ? 1 : 0);
    bytes::put_u16(p.code, s.clause);
    bytes::put_u8(p.code, s.literal_done ? 1 : 0);
    return p;
}

Qbf::State Qbf::decode(const Position& p) const {
    State s;
    const std::size_t n = names_.size();
    s.value.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.value[i] = bytes::u8(p.code, i);
    s.over = bytes::u8(p.code, n) != 0;
    s.clause = bytes::u16(p.code, n + 1);
    s.literal_done = bytes::u8(p.code, n + 3) != 0;
    return s;
}

Label Qbf::encode_move(const MoveLabel& m) {
    Label l;
    bytes::put_u8(l.code, static_cast<std::uint8_t>(m.kind));
    bytes::put_u16(l.code, m.a);
    bytes::put_u8(l.code, m.value ? 1 : 0);
    bytes::put_u8(l.code, m.declare ? 1 : 0);
    return l;
}

Qbf::MoveLabel Qbf::decode_move(const Label& m) {
    MoveLabel r;
    r.kind = static_cast<Kind>(bytes::u8(m.code, 0));
    r.a = bytes::u16(m.code, 1);
    r.value = bytes::u8(m.code, 3) != 0;
    r.declare = bytes::u8(m.code, 4) != 0;
    return r;
}

std::vector<Position> Qbf::start() const {
    State s;
    s.value.assign(names_.size(), 0);
    return {encode(s)};
}

void Qbf::assignment_moves(const State& s, Player h, std::vector<MoveLabel>& out) const {
    std::vector<int> vars;
    if (family_ == QbfFamily::Qbf) {
        for (int v : order_)
            if (s.value[v] == 0) {
                if (owner(v) == h) vars.push_back(v);
                break;
            }
    } else {
        for (std::size_t v = 0; v < names_.size(); ++v)
            if (s.value[v] == 0 && owner(static_cast<int>(v)) == h) vars.push_back(static_cast<int>(v));
    }
    State after = s;
    for (int v : vars) {
        for (bool value : {false, true}) {
            after.value[v] = value ? 2 : 1;
            const bool win = wins(after, h);
            const bool final_move = merged_ && all_assigned(after.value);
            if (!final_move || win) out.push_back({Kind::Assign, static_cast<std::uint16_t>(v), value, false});
            if (variant_ == QbfVariant::Ko && win)
                out.push_back({Kind::Assign, static_cast<std::uint16_t>(v), value, true});
        }
        after.value[v] = 0;
    }
}

std::vector<Qbf::MoveLabel> Qbf::move_list(const State& s, Player h) const {
    std::vector<MoveLabel> out;
    if (s.over) return out;
    if (variant_ == QbfVariant::Tko) {
        const bool tw = true_wins(s), fw = false_wins(s);
        if (tw || fw) {
            if ((tw ? Player::Left : Player::Right) == h) out.push_back({Kind::End});
            return out;
        }
    }
    if (s.clause != kNone) {
        if (variant_ == QbfVariant::LiteralSelector && !s.literal_done && h == Player::Left) {
            const auto& c = clauses_[s.clause];
            for (std::size_t j = 0; j < c.size(); ++j)
                if (literal_true(s.value, c[j])) out.push_back({Kind::Literal, static_cast<std::uint16_t>(j)});
        }
        return out;
    }
    if (!all_assigned(s.value)) {
        assignment_moves(s, h, out);
    } else {
        switch (variant_) {
            case QbfVariant::Phantom:
                if (!merged_ && wins(s, h)) out.push_back({Kind::Phantom});
                break;
            case QbfVariant::ClauseSelector:
                if (h == Player::Right)
                    for (std::size_t c = 0; c < clauses_.size(); ++c)
                        if (std::all_of(clauses_[c].begin(), clauses_[c].end(),
                                        [&](const Literal& l) { return literal_false(s.value, l); }))
                            out.push_back({Kind::Clause, static_cast<std::uint16_t>(c)});
                break;
            case QbfVariant::LiteralSelector:
                if (h == Player::Right)
                    for (std::size_t c = 0; c < clauses_.size(); ++c)
                        out.push_back({Kind::Clause, static_cast<std::uint16_t>(c)});
                break;
            case QbfVariant::Ko:
                if (wins(s, h)) out.push_back({Kind::End});
                break;
            case QbfVariant::Tko:
            case QbfVariant::Haymaker:
                break;
        }
    }
    if (variant_ == QbfVariant::Haymaker && wins(s, h)) out.push_back({Kind::End});
    return out;
}

void Qbf::moves(const Position& p, Player h, std::vector<Label>& out) const {
    const std::size_t first = out.size();
    for (const auto& m : move_list(decode(p), h)) out.push_back(encode_move(m));
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

std::optional<Position> Qbf::apply(const Position& p, const Label& m, Player h) const {
    if (m.code.size() != 5) return std::nullopt;
    State s = decode(p);
    const MoveLabel mv = decode_move(m);
    bool found = false;
    for (const auto& x : move_list(s, h))
        if (x.kind == mv.kind && x.a == mv.a && x.value == mv.value && x.declare == mv.declare) found = true;
    if (!found) return std::nullopt;
    switch (mv.kind) {
        case Kind::Assign:
            s.value[mv.a] = mv.value ? 2 : 1;
            if (mv.declare) s.over = true;
            break;
        case Kind::Phantom:
        case Kind::End:
            s.over = true;
            break;
        case Kind::Clause:
            s.clause = mv.a;
            break;
        case Kind::Literal:
            s.literal_done = true;
            break;
    }
    return encode(s);
}

json Qbf::instance_json() const {
    json cl = json::array();
    for (const auto& c : clauses_) {
        json a = json::array();
        for (const auto& l : c) a.push_back({{"var", names_[l.var]}, {"neg", l.neg}});
        cl.push_back(a);
    }
    json j{{"ruleset", "qbf"},
           {"family", family_ == QbfFamily::Qbf ? "qbf" : "qsat"},
           {"variant", to_string(variant_)},
           {"true_vars", std::vector<std::string>(names_.begin(), names_.begin() + static_cast<long>(n_true_))},
           {"false_vars", std::vector<std::string>(names_.begin() + static_cast<long>(n_true_), names_.end())},
           {"clauses", cl}};
    if (merged_) j["merged_phantom"] = true;
    return j;
}

json Qbf::position_to_json(const Position& p) const {
    auto s = decode(p);
    json a = json::object();
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (s.value[i]) a[names_[i]] = s.value[i] == 2;
    json j{{"assignment", a}, {"over", s.over}};
    j["clause"] = s.clause == kNone ? json(nullptr) : json(s.clause);
    j["literal_done"] = s.literal_done;
    return j;
}

Position Qbf::position_from_json(const json& j) const {
    State s;
    s.value.assign(names_.size(), 0);
    const json& a = detail::field(j, "assignment");
    if (!a.is_object()) detail::schema_error("assignment must be an object");
    for (auto it = a.begin(); it != a.end(); ++it) {
        int v = detail::find_name(names_, it.key());
        if (v < 0) detail::invalid("unknown variable '" + it.key() + "'");
        s.value[v] = detail::as_bool(it.value(), "assignment value") ? 2 : 1;
    }
    if (auto it = j.find("over"); it != j.end()) s.over = detail::as_bool(*it, "over");
    if (auto it = j.find("clause"); it != j.end() && !it->is_null()) {
        auto c = detail::as_int(*it, "clause");
        if (c < 0 || static_cast<std::size_t>(c) >= clauses_.size()) detail::invalid("clause index out of range");
        s.clause = static_cast<std::uint16_t>(c);
    }
    if (auto it = j.find("literal_done"); it != j.end()) s.literal_done = detail::as_bool(*it, "literal_done");
    return encode(s);
}

json Qbf::label_to_json(const Label& m) const {
    auto mv = decode_move(m);
    switch (mv.kind) {
        case Kind::Assign: {
            json j{{"var", names_[mv.a]}, {"value", mv.value}};
            if (mv.declare) j["declare"] = true;
            return j;
        }
        case Kind::Phantom: return json{{"phantom", true}};
        case Kind::Clause: return json{{"clause", mv.a}};
        case Kind::Literal: return json{{"literal", mv.a}};
        case Kind::End: return json{{"end", true}};
    }
    return json();
}

Label Qbf::label_from_json(const json& j) const {
    if (!j.is_object()) detail::schema_error("qbf move must be an object");
    MoveLabel mv;
    if (j.contains("var")) {
        mv.kind = Kind::Assign;
        auto name = detail::as_string(j["var"], "var");
        int v = detail::find_name(names_, name);
        if (v < 0) detail::invalid("unknown variable '" + name + "'");
        mv.a = static_cast<std::uint16_t>(v);
        mv.value = detail::as_bool(detail::field(j, "value"), "value");
        if (j.contains("declare")) mv.declare = detail::as_bool(j["declare"], "declare");
    } else if (j.contains("phantom")) {
        mv.kind = Kind::Phantom;
    } else if (j.contains("clause")) {
        mv.kind = Kind::Clause;
        mv.a = static_cast<std::uint16_t>(detail::as_int(j["clause"], "clause"));
    } else if (j.contains("literal")) {
        mv.kind = Kind::Literal;
        mv.a = static_cast<std::uint16_t>(detail::as_int(j["literal"], "literal"));
    } else if (j.contains("end")) {
        mv.kind = Kind::End;
    } else {
        detail::schema_error("unrecognised qbf move");
    }
    return encode_move(mv);
}

std::string Qbf::label_text(const Label& m) const {
    auto mv = decode_move(m);
    switch (mv.kind) {
        case Kind::Assign: return names_[mv.a] + "=" + (mv.value ? "T" : "F") + (mv.declare ? "!" : "");
        case Kind::Phantom: return "phantom";
        case Kind::Clause: return "C" + std::to_string(mv.a + 1);
        case Kind::Literal: return "lit" + std::to_string(mv.a + 1);
        case Kind::End: return "end";
    }
    return "?";
}

}  // namespace qcg
