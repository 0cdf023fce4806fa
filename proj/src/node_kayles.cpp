#include <bit>

#include "bytes.hpp"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

NodeKayles::NodeKayles(std::vector<std::string> vertices, std::vector<std::uint64_t> adj, KaylesVariant variant,
                       std::vector<Color> colors, State initial)
    : names_(std::move(vertices)), adj_(std::move(adj)), variant_(variant), colors_(std::move(colors)),
      initial_(initial) {
    detail::check_names(names_, "vertex", kMaxVertices);
    if (adj_.size() != names_.size()) detail::invalid("adjacency size mismatch");
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        adj_[v] &= ~(std::uint64_t{1} << v);
        for (std::size_t u = 0; u < adj_.size(); ++u)
            if (adj_[v] >> u & 1) adj_[u] |= std::uint64_t{1} << v;
    }
    if (variant_ == KaylesVariant::Bigraph && colors_.size() != names_.size())
        detail::invalid("bigraph node kayles needs a color for every vertex");
    if (variant_ != KaylesVariant::Bigraph) colors_.clear();
    if (variant_ != KaylesVariant::Snort) {
        initial_.blue |= initial_.red;
        initial_.red = 0;
    }
    if (initial_.blue & initial_.red) detail::invalid("vertex holds two tokens");
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (variant_ == KaylesVariant::Snort) {
            if ((initial_.blue & bit) && (adj_[v] & initial_.red))
                detail::invalid("blue and red tokens on adjacent vertices");
        } else if ((initial_.blue & bit) && (adj_[v] & initial_.blue)) {
            detail::invalid("occupied vertices must be independent");
        }
    }
    std::string k;
    bytes::put_u8(k, static_cast<std::uint8_t>(variant_));
    bytes::put_u16(k, static_cast<std::uint16_t>(names_.size()));
    for (auto a : adj_) bytes::put_u64(k, a);
    for (auto c : colors_) bytes::put_u8(k, static_cast<std::uint8_t>(c));
    set_instance_key(k);
}

int NodeKayles::vertex_id(const std::string& name) const { return detail::find_name(names_, name); }

Position NodeKayles::encode(const State& s) const {
    Position p;
    bytes::put_u64(p.code, s.blue);
    if (variant_ == KaylesVariant::Snort) bytes::put_u64(p.code, s.red);
    return p;
}

NodeKayles::State NodeKayles::decode(const Position& p) const {
    State s;
    s.blue = bytes::u64(p.code, 0);
    if (variant_ == KaylesVariant::Snort) s.red = bytes::u64(p.code, 8);
    return s;
}

Label NodeKayles::place(int v) {
    Label l;
    bytes::put_u16(l.code, static_cast<std::uint16_t>(v));
    return l;
}

int NodeKayles::vertex_of(const Label& m) { return bytes::u16(m.code, 0); }

bool NodeKayles::playable(const State& s, int v, Player h) const {
    const std::uint64_t bit = std::uint64_t{1} << v;
    const std::uint64_t occ = s.blue | s.red;
    if (occ & bit) return false;
    switch (variant_) {
        case KaylesVariant::Plain:
            return !(adj_[v] & occ);
        case KaylesVariant::Bigraph:
            return colors_[v] == (h == Player::Left ? Color::Blue : Color::Red) && !(adj_[v] & occ);
        case KaylesVariant::Snort:
            return !(adj_[v] & (h == Player::Left ? s.red : s.blue));
    }
    return false;
}

void NodeKayles::moves(const Position& p, Player h, std::vector<Label>& out) const {
    auto s = decode(p);
    for (std::size_t v = 0; v < names_.size(); ++v)
        if (playable(s, static_cast<int>(v), h)) out.push_back(place(static_cast<int>(v)));
}

std::optional<Position> NodeKayles::apply(const Position& p, const Label& m, Player h) const {
    if (m.code.size() != 2) return std::nullopt;
    auto s = decode(p);
    const int v = vertex_of(m);
    if (static_cast<std::size_t>(v) >= names_.size() || !playable(s, v, h)) return std::nullopt;
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (variant_ == KaylesVariant::Snort && h == Player::Right)
        s.red |= bit;
    else
        s.blue |= bit;
    return encode(s);
}

namespace {

const char* variant_name(KaylesVariant v) {
    switch (v) {
        case KaylesVariant::Plain: return "plain";
        case KaylesVariant::Bigraph: return "bigraph";
        case KaylesVariant::Snort: return "snort";
    }
    return "plain";
}

}  // namespace

json NodeKayles::instance_json() const {
    json edges = json::array();
    for (std::size_t v = 0; v < adj_.size(); ++v)
        for (std::size_t u = v + 1; u < adj_.size(); ++u)
            if (adj_[v] >> u & 1) edges.push_back(json::array({names_[v], names_[u]}));
    json j{{"ruleset", "node_kayles"},
           {"variant", variant_name(variant_)},
           {"vertices", names_},
           {"edges", edges},
           {"occupied", detail::mask_names(initial_.blue | initial_.red, names_)}};
    if (variant_ == KaylesVariant::Bigraph) {
        json c = json::object();
        for (std::size_t v = 0; v < names_.size(); ++v) c[names_[v]] = colors_[v] == Color::Blue ? "blue" : "red";
        j["colors"] = c;
    } else if (variant_ == KaylesVariant::Snort) {
        json c = json::object();
        for (std::size_t v = 0; v < names_.size(); ++v) {
            if (initial_.blue >> v & 1) c[names_[v]] = "blue";
            if (initial_.red >> v & 1) c[names_[v]] = "red";
        }
        j["colors"] = c;
    }
    return j;
}

json NodeKayles::position_to_json(const Position& p) const {
    auto s = decode(p);
    if (variant_ == KaylesVariant::Snort)
        return json{{"blue", detail::mask_names(s.blue, names_)}, {"red", detail::mask_names(s.red, names_)}};
    return json{{"occupied", detail::mask_names(s.blue, names_)}};
}

Position NodeKayles::position_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return vertex_id(n); };
    auto read = [&](const char* key) {
        std::uint64_t m = 0;
        for (const auto& v : detail::as_array(detail::field(j, key), key))
            m |= std::uint64_t{1} << detail::resolve(lookup, v, "vertex");
        return m;
    };
    State s;
    if (variant_ == KaylesVariant::Snort) {
        s.blue = read("blue");
        s.red = read("red");
    } else {
        s.blue = read("occupied");
    }
    return encode(s);
}

json NodeKayles::label_to_json(const Label& m) const { return json{{"vertex", names_[vertex_of(m)]}}; }

Label NodeKayles::label_from_json(const json& j) const {
    auto lookup = [this](const std::string& n) { return vertex_id(n); };
    const json& v = j.is_string() ? j : detail::field(j, "vertex");
    return place(detail::resolve(lookup, v, "vertex"));
}

std::string NodeKayles::label_text(const Label& m) const { return names_[vertex_of(m)]; }

}  // namespace qcg
