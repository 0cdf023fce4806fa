#include "bytes.hpp"
#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

Nim::Nim(std::vector<std::uint32_t> piles) : piles_(std::move(piles)) {
    if (piles_.size() > 0xffff) detail::invalid("too many piles");
    std::string k;
    bytes::put_u32(k, static_cast<std::uint32_t>(piles_.size()));
    set_instance_key(k);
}

Position Nim::encode(const std::vector<std::uint32_t>& piles) {
    Position p;
    p.code.reserve(piles.size() * 4);
    for (auto v : piles) bytes::put_u32(p.code, v);
    return p;
}

std::vector<std::uint32_t> Nim::decode(const Position& p) {
    std::vector<std::uint32_t> out(p.code.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = bytes::u32(p.code, 4 * i);
    return out;
}

Label Nim::move(std::size_t pile, std::uint32_t take) {
    Label l;
    bytes::put_u16(l.code, static_cast<std::uint16_t>(pile));
    bytes::put_u32(l.code, take);
    return l;
}

std::pair<std::size_t, std::uint32_t> Nim::decode_move(const Label& m) {
    return {bytes::u16(m.code, 0), bytes::u32(m.code, 2)};
}

void Nim::moves(const Position& p, Player, std::vector<Label>& out) const {
    const std::size_t n = p.code.size() / 4;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = bytes::u32(p.code, 4 * i);
        for (std::uint32_t t = 1; t <= v; ++t) out.push_back(move(i, t));
    }
}

std::optional<Position> Nim::apply(const Position& p, const Label& m, Player) const {
    if (m.code.size() != 6) return std::nullopt;
    auto [pile, take] = decode_move(m);
    if (pile >= p.code.size() / 4 || take == 0) return std::nullopt;
    const std::uint32_t v = bytes::u32(p.code, 4 * pile);
    if (take > v) return std::nullopt;
    Position r = p;
    std::string enc;
    bytes::put_u32(enc, v - take);
    r.code.replace(4 * pile, 4, enc);
    return r;
}

json Nim::instance_json() const { return json{{"ruleset", "nim"}, {"piles", piles_}}; }

json Nim::position_to_json(const Position& p) const { return decode(p); }

Position Nim::position_from_json(const json& j) const {
    detail::as_array(j, "nim position");
    if (j.size() != piles_.size()) detail::invalid("nim position has the wrong pile count");
    std::vector<std::uint32_t> v;
    for (const auto& e : j) {
        auto x = detail::as_int(e, "pile size");
        if (x < 0) detail::invalid("negative pile size");
        v.push_back(static_cast<std::uint32_t>(x));
    }
    return encode(v);
}

json Nim::label_to_json(const Label& m) const {
    auto [pile, take] = decode_move(m);
    return json{{"pile", pile}, {"take", take}};
}

Label Nim::label_from_json(const json& j) const {
    auto pile = detail::as_int(detail::field(j, "pile"), "pile");
    auto take = detail::as_int(detail::field(j, "take"), "take");
    if (pile < 0 || static_cast<std::size_t>(pile) >= piles_.size()) detail::invalid("pile index out of range");
    if (take < 1) detail::invalid("take must be positive");
    return move(static_cast<std::size_t>(pile), static_cast<std::uint32_t>(take));
}

std::string Nim::label_text(const Label& m) const {
    auto [pile, take] = decode_move(m);
    std::string s = "(";
    for (std::size_t i = 0; i < piles_.size(); ++i) {
        if (i) s += ",";
        s += i == pile ? "-" + std::to_string(take) : "0";
    }
    return s + ")";
}

std::string Nim::position_text(const Position& p) const {
    std::string s = "(";
    auto v = decode(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

}  // namespace qcg
