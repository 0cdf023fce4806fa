#include "json_util.hpp"
#include "qcg/rulesets.hpp"

namespace qcg {

namespace {

using detail::as_array;
using detail::as_bool;
using detail::as_int;
using detail::as_string;
using detail::field;

std::vector<std::uint64_t> read_edges(const json& edges, const std::vector<std::string>& names, bool directed) {
    std::vector<std::uint64_t> adj(names.size(), 0);
    auto lookup = [&](const std::string& n) { return detail::find_name(names, n); };
    for (const auto& e : as_array(edges, "edges")) {
        if (!e.is_array() || e.size() != 2) detail::schema_error("each edge must be a pair of vertex names");
        int a = detail::resolve(lookup, e[0], "vertex");
        int b = detail::resolve(lookup, e[1], "vertex");
        if (a == b) detail::invalid("self-loop on '" + names[a] + "'");
        adj[a] |= std::uint64_t{1} << b;
        if (!directed) adj[b] |= std::uint64_t{1} << a;
    }
    return adj;
}

std::uint64_t read_mask(const json& j, const char* key, const std::vector<std::string>& names, const char* what) {
    std::uint64_t m = 0;
    auto it = j.find(key);
    if (it == j.end()) return 0;
    auto lookup = [&](const std::string& n) { return detail::find_name(names, n); };
    for (const auto& v : as_array(*it, key)) m |= std::uint64_t{1} << detail::resolve(lookup, v, what);
    return m;
}

std::vector<std::string> read_names(const json& j, const char* key, const char* what) {
    auto names = detail::string_list(field(j, key), key);
    detail::check_names(names, what, kMaxVertices);
    return names;
}

RulesetPtr nim_from_json(const json& j) {
    std::vector<std::uint32_t> piles;
    for (const auto& p : as_array(field(j, "piles"), "piles")) {
        auto v = as_int(p, "pile size");
        if (v < 0) detail::invalid("negative pile size");
        piles.push_back(static_cast<std::uint32_t>(v));
    }
    return std::make_shared<Nim>(std::move(piles));
}

RulesetPtr geography_from_json(const json& j) {
    auto names = read_names(j, "vertices", "vertex");
    const bool directed = as_bool(field(j, "directed"), "directed");
    auto lookup = [&](const std::string& n) { return detail::find_name(names, n); };
    if (names.empty()) detail::invalid("geography needs at least one vertex");
    int start = detail::resolve(lookup, field(j, "start"), "vertex");
    std::uint64_t visited = read_mask(j, "visited", names, "vertex");
    std::vector<Geography::Board> boards;
    if (auto it = j.find("boards"); it != j.end()) {
        for (const auto& b : as_array(*it, "boards"))
            boards.push_back({as_string(field(b, "name"), "board name"), read_edges(field(b, "edges"), names, directed)});
    } else {
        boards.push_back({"main", read_edges(field(j, "edges"), names, directed)});
    }
    return std::make_shared<Geography>(std::move(names), directed, std::move(boards), start, visited);
}

RulesetPtr node_kayles_from_json(const json& j) {
    auto names = read_names(j, "vertices", "vertex");
    KaylesVariant variant = KaylesVariant::Plain;
    if (auto it = j.find("variant"); it != j.end()) {
        auto v = as_string(*it, "variant");
        if (v == "plain")
            variant = KaylesVariant::Plain;
        else if (v == "bigraph")
            variant = KaylesVariant::Bigraph;
        else if (v == "snort")
            variant = KaylesVariant::Snort;
        else
            detail::schema_error("unknown node_kayles variant '" + v + "'");
    }
    auto adj = read_edges(field(j, "edges"), names, false);
    const std::uint64_t occupied = read_mask(j, "occupied", names, "vertex");
    std::map<int, Color> color_of;
    if (auto it = j.find("colors"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) detail::schema_error("colors must be an object");
        for (auto c = it->begin(); c != it->end(); ++c) {
            int v = detail::find_name(names, c.key());
            if (v < 0) detail::invalid("unknown vertex '" + c.key() + "'");
            auto col = as_string(c.value(), "color");
            if (col == "blue")
                color_of[v] = Color::Blue;
            else if (col == "red")
                color_of[v] = Color::Red;
            else
                detail::schema_error("color must be 'blue' or 'red'");
        }
    }
    std::vector<Color> colors;
    NodeKayles::State init;
    if (variant == KaylesVariant::Bigraph) {
        for (std::size_t v = 0; v < names.size(); ++v) {
            auto it = color_of.find(static_cast<int>(v));
            if (it == color_of.end()) detail::invalid("bigraph vertex '" + names[v] + "' has no color");
            colors.push_back(it->second);
        }
        init.blue = occupied;
    } else if (variant == KaylesVariant::Snort) {
        for (std::size_t v = 0; v < names.size(); ++v) {
            if (!(occupied >> v & 1)) continue;
            auto it = color_of.find(static_cast<int>(v));
            if (it == color_of.end()) detail::invalid("snort token on '" + names[v] + "' has no color");
            (it->second == Color::Blue ? init.blue : init.red) |= std::uint64_t{1} << v;
        }
    } else {
        init.blue = occupied;
    }
    return std::make_shared<NodeKayles>(std::move(names), std::move(adj), variant, std::move(colors), init);
}

RulesetPtr avoid_true_from_json(const json& j) {
    auto names = read_names(j, "variables", "variable");
    std::vector<std::uint64_t> clauses;
    auto lookup = [&](const std::string& n) { return detail::find_name(names, n); };
    for (const auto& c : as_array(field(j, "clauses"), "clauses")) {
        std::uint64_t m = 0;
        for (const auto& v : as_array(c, "clause")) m |= std::uint64_t{1} << detail::resolve(lookup, v, "variable");
        clauses.push_back(m);
    }
    std::uint64_t free = names.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << names.size()) - 1;
    if (j.contains("free")) free = read_mask(j, "free", names, "variable");
    return std::make_shared<AvoidTrue>(std::move(names), std::move(clauses), free);
}

RulesetPtr qbf_from_json(const json& j) {
    auto fam = as_string(field(j, "family"), "family");
    QbfFamily family;
    if (fam == "qbf")
        family = QbfFamily::Qbf;
    else if (fam == "qsat")
        family = QbfFamily::Qsat;
    else
        detail::schema_error("family must be 'qbf' or 'qsat'");
    auto var = parse_qbf_variant(as_string(field(j, "variant"), "variant"));
    if (!var) detail::schema_error("unknown qbf variant");
    auto tv = detail::string_list(field(j, "true_vars"), "true_vars");
    auto fv = detail::string_list(field(j, "false_vars"), "false_vars");
    std::vector<std::string> all = tv;
    all.insert(all.end(), fv.begin(), fv.end());
    std::vector<std::vector<Literal>> clauses;
    for (const auto& c : as_array(field(j, "clauses"), "clauses")) {
        std::vector<Literal> lits;
        for (const auto& l : as_array(c, "clause")) {
            auto name = as_string(field(l, "var"), "var");
            int v = detail::find_name(all, name);
            if (v < 0) detail::invalid("unknown variable '" + name + "'");
            bool neg = l.contains("neg") ? as_bool(l["neg"], "neg") : false;
            lits.push_back({v, neg});
        }
        clauses.push_back(std::move(lits));
    }
    bool merged = j.contains("merged_phantom") ? as_bool(j["merged_phantom"], "merged_phantom") : false;
    return std::make_shared<Qbf>(family, *var, std::move(tv), std::move(fv), std::move(clauses), merged);
}

template <class F>
auto guarded(F f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        detail::schema_error(e.what());
    }
}

}  // namespace

RulesetPtr ruleset_from_json(const json& j) {
    return guarded([&]() -> RulesetPtr {
        auto kind = as_string(field(j, "ruleset"), "ruleset");
        if (kind == "nim") return nim_from_json(j);
        if (kind == "geography") return geography_from_json(j);
        if (kind == "node_kayles") return node_kayles_from_json(j);
        if (kind == "avoid_true") return avoid_true_from_json(j);
        if (kind == "qbf") return qbf_from_json(j);
        detail::schema_error("unknown ruleset '" + kind + "'");
    });
}

Superposition superposition_from_json(const Ruleset& rs, const json& j) {
    return guarded([&] {
        std::vector<Position> ps;
        for (const auto& p : as_array(j, "superposition")) ps.push_back(rs.position_from_json(p));
        auto s = Superposition::from(std::move(ps));
        if (!s) detail::invalid("superposition must have at least one realization");
        return *s;
    });
}

json superposition_to_json(const Ruleset& rs, const Superposition& s) {
    json a = json::array();
    for (const auto& r : s.realizations()) a.push_back(rs.position_to_json(r));
    return a;
}

GameSpec game_from_json(const json& j) {
    auto rs = ruleset_from_json(j);
    return guarded([&] {
        std::optional<Superposition> start;
        if (auto it = j.find("superposition"); it != j.end())
            start = superposition_from_json(*rs, *it);
        else
            start = Superposition::from(rs->start());
        Player to_move = Player::Left;
        if (auto it = j.find("to_move"); it != j.end()) {
            auto p = parse_player(as_string(*it, "to_move"));
            if (!p) detail::schema_error("to_move must be 'Left' or 'Right'");
            to_move = *p;
        }
        return GameSpec{rs, *start, to_move};
    });
}

json move_to_json(const Ruleset& rs, const Move& m) {
    if (!m.quantum()) return json{{"classical", rs.label_to_json(m.label())}};
    json a = json::array();
    for (const auto& c : m.qmove().components()) a.push_back(rs.label_to_json(c));
    return json{{"quantum", a}};
}

Move move_from_json(const Ruleset& rs, const json& j) {
    return guarded([&]() -> Move {
        if (j.is_object() && j.contains("quantum")) {
            std::vector<Label> comps;
            for (const auto& c : as_array(j["quantum"], "quantum")) comps.push_back(rs.label_from_json(c));
            return QuantumMove::make(std::move(comps));
        }
        if (j.is_object() && j.contains("classical")) return rs.label_from_json(j["classical"]);
        return rs.label_from_json(j);
    });
}

std::string move_text(const Ruleset& rs, const Move& m) {
    if (!m.quantum()) return rs.label_text(m.label());
    std::string s = "<";
    bool first = true;
    for (const auto& c : m.qmove().components()) {
        s += (first ? "" : "|") + rs.label_text(c);
        first = false;
    }
    return s + ">";
}

GameConfig config_from_json(const json& j) {
    return guarded([&] {
        GameConfig c;
        if (j.is_null()) return c;
        if (!j.is_object()) detail::schema_error("config must be an object");
        if (auto it = j.find("flavor"); it != j.end()) {
            auto f = parse_flavor(as_string(*it, "flavor"));
            if (!f) detail::schema_error("unknown flavor '" + it->get<std::string>() + "'");
            c.flavor = *f;
        }
        auto opt_int = [&](const char* key) -> std::optional<int> {
            auto it = j.find(key);
            if (it == j.end() || it->is_null()) return std::nullopt;
            return static_cast<int>(as_int(*it, key));
        };
        if (auto w = opt_int("width")) c.width = *w;
        c.budget_left = opt_int("budget_left");
        c.budget_right = opt_int("budget_right");
        c.dimension_cap = opt_int("dimension_cap");
        if (auto it = j.find("demi"); it != j.end()) c.demi = as_bool(*it, "demi");
        try {
            c.validate();
        } catch (const Error& e) {
            detail::schema_error(e.reason());
        }
        return c;
    });
}

json config_to_json(const GameConfig& c) {
    json j{{"flavor", to_string(c.flavor)}, {"width", c.width}, {"demi", c.demi}};
    j["budget_left"] = c.budget_left ? json(*c.budget_left) : json(nullptr);
    j["budget_right"] = c.budget_right ? json(*c.budget_right) : json(nullptr);
    j["dimension_cap"] = c.dimension_cap ? json(*c.dimension_cap) : json(nullptr);
    return j;
}

}  // namespace qcg
