#include <bit>

#include "bytes.hpp"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

AvoidTrue::AvoidTrue(std::vector<std::string> variables, std::vector<std::uint64_t> clauses, std::uint64_t free)
    : names_(std::move(variables)), clauses_(std::move(clauses)), free_(free) {
    detail::check_names(names_, "variable", kMaxVertices);
    const std::uint64_t all = names_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << names_.size()) - 1;
    for (auto c : clauses_) {
        if (c == 0) detail::invalid("empty clause");
        if (c & ~all) detail::invalid("clause references an unknown variable");
    }
    free_ &= all;
    std::string k;
    bytes::put_u16(k, static_cast<std::uint16_t>(names_.size()));
    for (auto c : clauses_) bytes::put_u64(k, c);
    set_instance_key(k);
}

int AvoidTrue::variable_id(const std::string& name) const { return detail::find_name(names_, name); }

bool AvoidTrue::has_active_clause(std::uint64_t free) const {
    for (auto c : clauses_)
        if ((c & ~free) == 0) return true;
    return false;
}

Position AvoidTrue::encode(std::uint64_t free) {
    Position p;
    bytes::put_u64(p.code, free);
    return p;
}

std::uint64_t AvoidTrue::decode(const Position& p) { return bytes::u64(p.code, 0); }

Label AvoidTrue::choose(int var) {
    Label l;
    bytes::put_u16(l.code, static_cast<std::uint16_t>(var));
    return l;
}

int AvoidTrue::variable_of(const Label& m) { return bytes::u16(m.code, 0); }

void AvoidTrue::moves(const Position& p, Player, std::vector<Label>& out) const {
    const std::uint64_t free = decode(p);
    std::uint64_t rest = free;
    while (rest) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        if (has_active_clause(free & ~(std::uint64_t{1} << v))) out.push_back(choose(v));
    }
}

std::optional<Position> AvoidTrue::apply(const Position& p, const Label& m, Player) const {
    if (m.code.size() != 2) return std::nullopt;
    const std::uint64_t free = decode(p);
    const int v = variable_of(m);
    if (static_cast<std::size_t>(v) >= names_.size()) return std::nullopt;
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (!(free & bit)) return std::nullopt;
    const std::uint64_t next = free & ~bit;
    if (!has_active_clause(next)) return std::nullopt;
    return encode(next);
}

json AvoidTrue::instance_json() const {
    json cl = json::array();
    for (auto c : clauses_) cl.push_back(detail::mask_names(c, names_));
    return json{{"ruleset", "avoid_true"},
                {"variables", names_},
                {"clauses", cl},
                {"free", detail::mask_names(free_, names_)}};
}

json AvoidTrue::position_to_json(const Position& p) const {
    return json{{"free", detail::mask_names(decode(p), names_)}};
}

Position AvoidTrue::position_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return variable_id(n); };
    std::uint64_t free = 0;
    for (const auto& v : detail::as_array(detail::field(j, "free"), "free"))
        free |= std::uint64_t{1} << detail::resolve(lookup, v, "variable");
    return encode(free);
}

json AvoidTrue::label_to_json(const Label& m) const { return json{{"var", names_[variable_of(m)]}}; }

Label AvoidTrue::label_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return variable_id(n); };
    const json& v = j.is_string() ? j : detail::field(j, "var");
    return choose(detail::resolve(lookup, v, "variable"));
}

std::string AvoidTrue::label_text(const Label& m) const { return names_[variable_of(m)]; }

}  // namespace qcg
