#include <bit>

#include "bytes.hpp"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

Geography::Geography(std::vector<std::string> vertices, bool directed, std::vector<Board> boards, int start,
                     std::uint64_t visited)
    : names_(std::move(vertices)), directed_(directed), boards_(std::move(boards)), start_(start), visited_(visited) {
    detail::check_names(names_, "vertex", kMaxVertices);
    if (boards_.empty()) detail::invalid("geography needs at least one board");
    if (names_.empty()) detail::invalid("geography needs at least one vertex");
    if (start_ < 0 || static_cast<std::size_t>(start_) >= names_.size()) detail::invalid("start vertex out of range");
    visited_ |= std::uint64_t{1} << start_;
    for (auto& b : boards_) {
        if (b.adj.size() != names_.size()) detail::invalid("board adjacency size mismatch");
        if (!directed_)
            for (std::size_t v = 0; v < b.adj.size(); ++v)
                for (std::size_t u = 0; u < b.adj.size(); ++u)
                    if (b.adj[v] >> u & 1) b.adj[u] |= std::uint64_t{1} << v;
    }
    std::string k;
    bytes::put_u8(k, directed_ ? 1 : 0);
    bytes::put_u16(k, static_cast<std::uint16_t>(names_.size()));
    bytes::put_u16(k, static_cast<std::uint16_t>(boards_.size()));
    for (const auto& b : boards_)
        for (auto a : b.adj) bytes::put_u64(k, a);
    set_instance_key(k);
}

int Geography::vertex_id(const std::string& name) const { return detail::find_name(names_, name); }

Position Geography::encode(const State& s) {
    Position p;
    bytes::put_u16(p.code, static_cast<std::uint16_t>(s.board));
    bytes::put_u16(p.code, static_cast<std::uint16_t>(s.token));
    bytes::put_u64(p.code, s.visited);
    return p;
}

Geography::State Geography::decode(const Position& p) {
    return State{bytes::u16(p.code, 0), bytes::u16(p.code, 2), bytes::u64(p.code, 4)};
}

Label Geography::move_to(int v) {
    Label l;
    bytes::put_u16(l.code, static_cast<std::uint16_t>(v));
    return l;
}

int Geography::destination(const Label& m) { return bytes::u16(m.code, 0); }

std::vector<Position> Geography::start() const {
    std::vector<Position> out;
    for (std::size_t b = 0; b < boards_.size(); ++b) out.push_back(encode({static_cast<int>(b), start_, visited_}));
    return out;
}

void Geography::moves(const Position& p, Player, std::vector<Label>& out) const {
    auto s = decode(p);
    std::uint64_t open = boards_[s.board].adj[s.token] & ~s.visited;
    while (open) {
        int v = std::countr_zero(open);
        open &= open - 1;
        out.push_back(move_to(v));
    }
}

std::optional<Position> Geography::apply(const Position& p, const Label& m, Player) const {
    if (m.code.size() != 2) return std::nullopt;
    auto s = decode(p);
    const int v = destination(m);
    if (static_cast<std::size_t>(v) >= names_.size()) return std::nullopt;
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (!(boards_[s.board].adj[s.token] & bit) || (s.visited & bit)) return std::nullopt;
    s.token = v;
    s.visited |= bit;
    return encode(s);
}

namespace {

json edge_list(const std::vector<std::uint64_t>& adj, const std::vector<std::string>& names, bool directed) {
    json edges = json::array();
    for (std::size_t v = 0; v < adj.size(); ++v)
        for (std::size_t u = directed ? 0 : v + 1; u < adj.size(); ++u)
            if (adj[v] >> u & 1) edges.push_back(json::array({names[v], names[u]}));
    return edges;
}

}  // namespace

json Geography::instance_json() const {
    json j{{"ruleset", "geography"},
           {"directed", directed_},
           {"vertices", names_},
           {"edges", edge_list(boards_[0].adj, names_, directed_)},
           {"start", names_[start_]},
           {"visited", detail::mask_names(visited_, names_)}};
    if (boards_.size() > 1 || boards_[0].name != "main") {
        json bs = json::array();
        for (const auto& b : boards_) bs.push_back({{"name", b.name}, {"edges", edge_list(b.adj, names_, directed_)}});
        j["boards"] = bs;
    }
    return j;
}

json Geography::position_to_json(const Position& p) const {
    auto s = decode(p);
    json j{{"token", names_[s.token]}, {"visited", detail::mask_names(s.visited, names_)}};
    if (boards_.size() > 1) j["board"] = boards_[s.board].name;
    return j;
}

Position Geography::position_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return vertex_id(n); };
    State s;
    s.token = detail::resolve(lookup, detail::field(j, "token"), "vertex");
    for (const auto& v : detail::as_array(detail::field(j, "visited"), "visited"))
        s.visited |= std::uint64_t{1} << detail::resolve(lookup, v, "vertex");
    s.visited |= std::uint64_t{1} << s.token;
    if (auto it = j.find("board"); it != j.end()) {
        auto name = detail::as_string(*it, "board");
        s.board = -1;
        for (std::size_t b = 0; b < boards_.size(); ++b)
            if (boards_[b].name == name) s.board = static_cast<int>(b);
        if (s.board < 0) detail::invalid("unknown board '" + name + "'");
    }
    return encode(s);
}

json Geography::label_to_json(const Label& m) const { return json{{"to", names_[destination(m)]}}; }

Label Geography::label_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return vertex_id(n); };
    const json& v = j.is_string() ? j : detail::field(j, "to");
    return move_to(detail::resolve(lookup, v, "vertex"));
}

std::string Geography::label_text(const Label& m) const { return names_[destination(m)]; }

std::string Geography::position_text(const Position& p) const {
    auto s = decode(p);
    std::string out = boards_.size() > 1 ? boards_[s.board].name + ":" : "";
    out += "@" + names_[s.token] + "{";
    bool first = true;
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (s.visited >> i & 1) {
            out += (first ? "" : ",") + names_[i];
            first = false;
        }
    return out + "}";
}

}  // namespace qcg
