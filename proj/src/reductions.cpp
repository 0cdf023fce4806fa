#include "qcg/reductions.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "json_util.hpp"

namespace qcg {

namespace {

constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

void ensure(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvariantBroken, "reduction size bound", what);
}

std::string arc_name(const std::vector<std::string>& names, int a, int b) { return names[a] + "→" + names[b]; }

// A name not yet in `taken`, starting from `want`.
std::string fresh(const std::vector<std::string>& taken, std::string want) {
    while (std::find(taken.begin(), taken.end(), want) != taken.end()) want += '*';
    return want;
}

std::vector<std::pair<int, int>> arcs_of(const std::vector<std::uint64_t>& adj) {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < static_cast<int>(adj.size()); ++a)
        for (std::uint64_t m = adj[a]; m; m &= m - 1) out.emplace_back(a, std::countr_zero(m));
    return out;
}

}  // namespace

// ---- Avoid True to Nim ----

ReductionOutput avoid_true_to_nim(std::shared_ptr<const AvoidTrue> src, const Superposition& board) {
    const auto& clauses = src->clauses();
    const std::size_t n = src->variables().size();
    std::vector<std::optional<Position>> rs;
    json prov = json::array();
    for (std::size_t r = 0; r < board.width(); ++r) {
        const std::uint64_t free = AvoidTrue::decode(board.realizations()[r]);
        for (std::size_t c = 0; c < clauses.size(); ++c) {
            if ((clauses[c] & free) != clauses[c]) continue;  // satisfied, not active
            std::vector<std::uint32_t> piles(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                if ((free >> i & 1) && !(clauses[c] >> i & 1)) piles[i] = 1;
            rs.push_back(Nim::encode(piles));
            prov.push_back({{"realization", r}, {"clause", c}, {"piles", piles}});
        }
    }
    auto sup = filter(rs);
    if (!sup) throw Error(ErrorCode::InvalidInstance, "no active clause in any realization");
    ensure(sup->width() <= board.width() * clauses.size(), "nim width exceeds realizations times clauses");
    ReductionOutput out{"avoid-true-to-nim", std::make_shared<Nim>(std::vector<std::uint32_t>(n, 1)), *sup};
    out.provenance = {{"piles", src->variables()}, {"realizations", prov}};
    return out;
}

// ---- edge subdivision ----

ReductionOutput geography_edge_subdivision(const Geography& src) {
    if (!src.directed()) throw Error(ErrorCode::UnsupportedShape, "edge subdivision needs a directed instance");
    if (src.boards().size() != 1) throw Error(ErrorCode::UnsupportedShape, "edge subdivision needs a classical start");
    const auto& names = src.vertices();
    const auto arcs = arcs_of(src.boards().front().adj);
    std::vector<std::string> out_names = names;
    json arc_map = json::object();
    std::vector<std::pair<int, int>> out_arcs;
    for (auto [a, b] : arcs) {
        const std::string base = arc_name(names, a, b);
        const int m1 = static_cast<int>(out_names.size());
        out_names.push_back(fresh(out_names, base + "#1"));
        out_names.push_back(fresh(out_names, base + "#2"));
        out_arcs.insert(out_arcs.end(), {{a, m1}, {m1, m1 + 1}, {m1 + 1, b}});
        arc_map[base] = {out_names[m1], out_names[m1 + 1]};
    }
    ensure(out_names.size() == names.size() + 2 * arcs.size(), "subdivision adds two vertices per arc");
    if (out_names.size() > kMaxVertices) throw Error(ErrorCode::InvalidInstance, "subdivided graph too large");
    std::vector<std::uint64_t> adj(out_names.size(), 0);
    for (auto [a, b] : out_arcs) adj[a] |= bit(b);
    auto rs = std::make_shared<Geography>(out_names, true, std::vector<Geography::Board>{{"main", adj}},
                                          src.start_vertex(), src.start_visited());
    ReductionOutput out{"edge-subdivide", rs, *Superposition::from(rs->start())};
    json vmap = json::object();
    for (const auto& v : names) vmap[v] = v;
    out.provenance = {{"vertices", vmap}, {"arcs", arc_map}};
    return out;
}

// ---- directed to undirected, poly-wide ----

ReductionOutput directed_to_undirected_polywide(const Geography& src) {
    if (!src.directed()) throw Error(ErrorCode::UnsupportedShape, "source must be directed");
    if (src.boards().size() != 1) throw Error(ErrorCode::UnsupportedShape, "source must have a classical start");
    const auto& names = src.vertices();
    const auto arcs = arcs_of(src.boards().front().adj);
    std::vector<std::string> out_names = names;
    struct Gadget {
        int a, b, m1, m2, stop;
    };
    std::vector<Gadget> gadgets;
    for (auto [a, b] : arcs) {
        const std::string base = arc_name(names, a, b);
        const int m1 = static_cast<int>(out_names.size());
        out_names.push_back(fresh(out_names, base + "#1"));
        out_names.push_back(fresh(out_names, base + "#2"));
        gadgets.push_back({a, b, m1, m1 + 1, -1});
    }
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        gadgets[i].stop = static_cast<int>(out_names.size());
        out_names.push_back(fresh(out_names, "STOP[" + arc_name(names, arcs[i].first, arcs[i].second) + "]"));
    }
    if (out_names.size() > kMaxVertices) throw Error(ErrorCode::InvalidInstance, "gadget graph too large");
    const std::size_t n = out_names.size();
    auto link = [](std::vector<std::uint64_t>& adj, int x, int y) {
        adj[x] |= bit(y);
        adj[y] |= bit(x);
    };
    std::vector<std::uint64_t> main(n, 0);
    for (const auto& g : gadgets) {
        link(main, g.a, g.m1);
        link(main, g.m1, g.m2);
        link(main, g.m2, g.b);
    }
    std::vector<Geography::Board> boards{{"main", main}};
    json board_map = json::object();
    json arc_map = json::object();
    for (const auto& g : gadgets) {
        auto adj = main;
        adj[g.m1] &= ~bit(g.m2);
        adj[g.m2] &= ~bit(g.m1);
        link(adj, g.stop, g.m2);
        const std::string base = arc_name(names, g.a, g.b);
        boards.push_back({base, adj});
        board_map[base] = base;
        arc_map[base] = {out_names[g.m1], out_names[g.m2], out_names[g.stop]};
    }
    auto rs = std::make_shared<Geography>(out_names, false, boards, src.start_vertex(), src.start_visited());
    auto sup = *Superposition::from(rs->start());
    ensure(sup.width() == arcs.size() + 1, "one realization per arc plus the main board");
    ReductionOutput out{"directed-to-undirected", rs, sup};
    json vmap = json::object();
    for (const auto& v : names) vmap[v] = v;
    out.provenance = {{"vertices", vmap}, {"arcs", arc_map}, {"boards", board_map}};
    return out;
}

// ---- Schaefer lift ----

ReductionOutput schaefer_lift(const Qbf& src) {
    if (src.family() != QbfFamily::Qsat || src.variant() != QbfVariant::Phantom || !src.merged_phantom())
        throw Error(ErrorCode::UnsupportedShape, "schaefer lift needs merged phantom-move QSAT");
    const std::size_t nt = src.true_count(), nv = src.var_count(), nf = nv - nt;
    if (nt != nf) throw Error(ErrorCode::UnsupportedShape, "schaefer lift needs equal variable counts");
    const auto& vn = src.variable_names();

    std::vector<std::string> names;
    auto add = [&](std::string s) {
        names.push_back(fresh(names, std::move(s)));
        return static_cast<int>(names.size() - 1);
    };
    std::vector<int> pos(nv), neg(nv), guard(nv, -1);
    std::vector<std::uint64_t> clauses;
    json classes = json::array();
    json var_map = json::object();
    for (std::size_t i = 0; i < nt; ++i) {
        pos[i] = add(vn[i] + "_1");
        neg[i] = add(vn[i] + "_2");
        clauses.push_back(bit(pos[i]) | bit(neg[i]));
        classes.push_back({{"class", "TV"}, {"source", vn[i]}});
    }
    for (std::size_t i = nt; i < nv; ++i) {
        pos[i] = add(vn[i] + "_1");
        neg[i] = add(vn[i] + "_2");
        guard[i] = add(vn[i] + "_G");
        clauses.push_back(bit(pos[i]) | bit(neg[i]) | bit(guard[i]));
        classes.push_back({{"class", "FV"}, {"source", vn[i]}});
    }
    ensure(names.size() == 2 * nt + 3 * nf, "two variables per True variable, three per False variable");
    // Duplicates are created on first use, keyed by (variable, polarity).
    std::map<std::pair<int, bool>, int> dup;
    auto duplicate = [&](int v, bool negated) {
        if (!negated && static_cast<std::size_t>(v) >= nt) return guard[v];
        auto [it, fresh_one] = dup.try_emplace({v, negated}, -1);
        if (fresh_one) it->second = add(vn[v] + (negated ? "_2'" : "_1'"));
        return it->second;
    };
    for (std::size_t c = 0; c < src.clauses().size(); ++c) {
        std::uint64_t m = 0;
        for (const auto& l : src.clauses()[c]) m |= bit(l.neg ? neg[l.var] : pos[l.var]) | bit(duplicate(l.var, l.neg));
        clauses.push_back(m);
        classes.push_back({{"class", "QBF"}, {"source", c}});
    }
    ensure(names.size() == 2 * nt + 3 * nf + dup.size(), "duplicates are the only extra variables");
    if (names.size() > kMaxVertices) throw Error(ErrorCode::InvalidInstance, "lifted instance too large");
    for (std::size_t i = 0; i < nv; ++i) {
        json e{{"true", names[pos[i]]}, {"false", names[neg[i]]}};
        if (guard[i] >= 0) e["guard"] = names[guard[i]];
        for (bool ng : {false, true})
            if (auto it = dup.find({static_cast<int>(i), ng}); it != dup.end())
                e[ng ? "duplicate_false" : "duplicate_true"] = names[it->second];
        var_map[vn[i]] = e;
    }
    const std::uint64_t all = names.size() == 64 ? ~std::uint64_t{0} : bit(static_cast<int>(names.size())) - 1;
    auto rs = std::make_shared<AvoidTrue>(names, clauses, all);
    ReductionOutput out{"schaefer-lift", rs, *Superposition::from(rs->start())};
    out.provenance = {{"variables", var_map}, {"clauses", classes}};
    return out;
}

// ---- QBF to Node Kayles ----

std::shared_ptr<const Qbf> qbf_pad_last_true(const Qbf& src) {
    const std::size_t nt = src.true_count(), nf = src.var_count() - nt;
    std::vector<std::string> tv(src.variable_names().begin(), src.variable_names().begin() + static_cast<long>(nt));
    std::vector<std::string> fv(src.variable_names().begin() + static_cast<long>(nt), src.variable_names().end());
    auto clauses = src.clauses();
    if (nt == nf) {
        std::vector<std::string> all = src.variable_names();
        tv.push_back(fresh(all, "pad"));
        // Shift False indices past the new True variable.
        for (auto& c : clauses)
            for (auto& l : c)
                if (static_cast<std::size_t>(l.var) >= nt) ++l.var;
        const int x = static_cast<int>(nt);
        clauses.push_back({{x, false}, {x, true}});
    } else if (nt != nf + 1) {
        throw Error(ErrorCode::UnsupportedShape, "True must move first and own at most one extra variable");
    }
    return std::make_shared<Qbf>(src.family(), src.variant(), tv, fv, clauses, src.merged_phantom());
}

bool qbf_truth(const Qbf& q) {
    const auto& order = q.order();
    std::vector<int> value(q.var_count(), 0);
    auto clause_true = [&](const std::vector<Literal>& c) {
        return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return (value[l.var] == 2) != l.neg; });
    };
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == order.size())
            return std::all_of(q.clauses().begin(), q.clauses().end(), clause_true);
        const int v = order[i];
        const bool exists = q.owner(v) == Player::Left;
        for (int val : {1, 2}) {
            value[v] = val;
            const bool r = self(self, i + 1);
            value[v] = 0;
            if (r == exists) return r;
        }
        return !exists;
    };
    return rec(rec, 0);
}

ReductionOutput qbf_to_node_kayles(const Qbf& src) {
    if (src.family() != QbfFamily::Qbf) throw Error(ErrorCode::UnsupportedShape, "needs an ordered QBF");
    auto q = qbf_pad_last_true(src);
    const auto& order = q->order();
    const int n = static_cast<int>(order.size());
    const auto& vn = q->variable_names();

    std::vector<std::string> names;
    std::vector<int> level;
    auto add = [&](std::string s, int lv) {
        names.push_back(fresh(names, std::move(s)));
        level.push_back(lv);
        return static_cast<int>(names.size() - 1);
    };
    // lits[i] = vertices standing for x_i true and for x_i false.
    std::vector<std::vector<int>> pos_v(n), neg_v(n);
    // T/F successors: which level-(i+1) vertices each level-i literal opens.
    std::vector<int> tpos(n, -1), fpos(n, -1), tneg(n, -1), fneg(n, -1);
    json var_map = json::object();
    for (int i = 0; i < n; ++i) {
        const std::string& v = vn[order[i]];
        if (i == 0) {
            pos_v[0] = {add(v, 1)};
            neg_v[0] = {add("~" + v, 1)};
            var_map[v] = {names[pos_v[0][0]], names[neg_v[0][0]]};
        } else {
            tpos[i] = add(v + ".T", i + 1);
            fpos[i] = add(v + ".F", i + 1);
            tneg[i] = add("~" + v + ".T", i + 1);
            fneg[i] = add("~" + v + ".F", i + 1);
            pos_v[i] = {tpos[i], fpos[i]};
            neg_v[i] = {tneg[i], fneg[i]};
            var_map[v] = {names[tpos[i]], names[fpos[i]], names[tneg[i]], names[fneg[i]]};
        }
    }
    // Guards y_ij for i < j <= n+1, on levels i <= n-1 only.
    struct Guard {
        int v, i, j;
    };
    std::vector<Guard> guards;
    json guard_map = json::array();
    for (int i = 1; i <= n - 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j) {
            const int y = add("y" + std::to_string(i) + "," + std::to_string(j), i);
            guards.push_back({y, i, j});
            guard_map.push_back(names[y]);
        }
    std::vector<int> clause_v;
    json clause_map = json::array();
    for (std::size_t c = 0; c < q->clauses().size(); ++c) {
        clause_v.push_back(add("C" + std::to_string(c + 1), n + 1));
        clause_map.push_back(names[clause_v.back()]);
    }
    if (names.size() > kMaxVertices) throw Error(ErrorCode::InvalidInstance, "node kayles graph too large");

    const std::size_t V = names.size();
    std::vector<std::uint64_t> adj(V, 0);
    auto link = [&](int x, int y) {
        if (x == y) return;
        adj[x] |= bit(y);
        adj[y] |= bit(x);
    };
    // Level cliques (variable levels include their guards; clauses form level n+1).
    for (std::size_t a = 0; a < V; ++a)
        for (std::size_t b = a + 1; b < V; ++b)
            if (level[a] == level[b]) link(static_cast<int>(a), static_cast<int>(b));
    // Truth-assignment edges: a positive literal opens the T pair below, a
    // negative one the F pair.
    for (int i = 0; i + 1 < n; ++i) {
        for (int x : pos_v[i]) {
            link(x, tpos[i + 1]);
            link(x, tneg[i + 1]);
        }
        for (int x : neg_v[i]) {
            link(x, fpos[i + 1]);
            link(x, fneg[i + 1]);
        }
    }
    // Clause-literal edges.
    std::vector<int> index_of(q->var_count(), -1);
    for (int i = 0; i < n; ++i) index_of[order[i]] = i;
    for (std::size_t c = 0; c < q->clauses().size(); ++c)
        for (const auto& l : q->clauses()[c])
            for (int x : l.neg ? neg_v[index_of[l.var]] : pos_v[index_of[l.var]]) link(clause_v[c], x);
    // Guards see everything except level j.
    for (const auto& g : guards)
        for (std::size_t u = 0; u < V; ++u)
            if (level[u] != g.j) link(g.v, static_cast<int>(u));

    auto rs = std::make_shared<NodeKayles>(names, adj, KaylesVariant::Plain, std::vector<Color>{},
                                           NodeKayles::State{});
    ReductionOutput out{"qbf-to-node-kayles", rs, *Superposition::from(rs->start())};
    out.provenance = {{"variables", var_map}, {"guards", guard_map}, {"clauses", clause_map},
                      {"padded", q->var_count() != src.var_count()}};
    return out;
}

// ---- Bigraph Node Kayles to Snort ----

ReductionOutput bigraph_to_snort(const NodeKayles& src) {
    if (src.variant() != KaylesVariant::Bigraph) throw Error(ErrorCode::UnsupportedShape, "source must be bigraph");
    std::vector<std::string> names = src.vertices();
    const int n = static_cast<int>(names.size());
    if (n + 2 > static_cast<int>(kMaxVertices)) throw Error(ErrorCode::InvalidInstance, "snort graph too large");
    const int blue = n, red = n + 1;
    names.push_back(fresh(names, "blue anchor"));
    names.push_back(fresh(names, "red anchor"));
    std::vector<std::uint64_t> adj = src.adjacency();
    adj.resize(n + 2, 0);
    NodeKayles::State init;
    init.blue = bit(blue);
    init.red = bit(red);
    for (int v = 0; v < n; ++v) {
        const int anchor = src.colors()[v] == Color::Blue ? blue : red;
        adj[v] |= bit(anchor);
        adj[anchor] |= bit(v);
        // Carry pre-placed tokens over by the vertex's colour.
        if (src.initial().blue >> v & 1) (src.colors()[v] == Color::Blue ? init.blue : init.red) |= bit(v);
    }
    auto rs = std::make_shared<NodeKayles>(names, adj, KaylesVariant::Snort, std::vector<Color>{}, init);
    ensure(rs->vertices().size() == src.vertices().size() + 2, "snort adds exactly two anchors");
    ReductionOutput out{"bigraph-to-snort", rs, *Superposition::from(rs->start())};
    json vmap = json::object();
    for (int v = 0; v < n; ++v) vmap[names[v]] = names[v];
    out.provenance = {{"vertices", vmap}, {"anchors", {{"blue", names[blue]}, {"red", names[red]}}}};
    return out;
}

ReductionOutput identity_reduction(RulesetPtr rs, const Superposition& board, Player to_move) {
    ReductionOutput out{"identity", rs, board, to_move};
    out.provenance = {{"identity", true}};
    return out;
}

// ---- verification ----

json ReductionReport::to_json() const {
    return {{"source", to_string(source)},
            {"target", to_string(target)},
            {"source_mover_wins", source_mover_wins},
            {"target_mover_wins", target_mover_wins},
            {"agree", agree},
            {"source_nodes", source_nodes},
            {"target_nodes", target_nodes}};
}

ReductionReport verify_reduction(const GameState& source, const ReductionOutput& out, const GameConfig& cfg,
                                 const SolveLimits& limits, Relation rel, bool classical_source) {
    ReductionReport r;
    GameState src = source;
    if (classical_source) src.config.demi = true;
    auto side = [&](const GameState& s, Outcome& outcome, bool& mover, std::uint64_t& nodes) {
        Solver solver(limits);
        mover = solver.wins(s);
        if (rel == Relation::SameOutcome) {
            GameState other = s;
            other.to_move = opposite(s.to_move);
            if (effectively_impartial(s)) {
                outcome = mover ? Outcome::N : Outcome::P;
            } else {
                const bool o = solver.wins(other);
                outcome = s.to_move == Player::Left ? outcome_of(mover, o) : outcome_of(o, mover);
            }
        } else {
            outcome = mover ? Outcome::N : Outcome::P;
        }
        nodes = solver.nodes();
    };
    side(src, r.source, r.source_mover_wins, r.source_nodes);
    side(out.game(cfg), r.target, r.target_mover_wins, r.target_nodes);
    r.agree = rel == Relation::SameOutcome ? r.source == r.target : r.source_mover_wins == r.target_mover_wins;
    return r;
}

// ---- CLI plumbing ----

const std::vector<std::string>& reduction_kinds() {
    static const std::vector<std::string> k{"avoid-true-to-nim",  "edge-subdivide",     "directed-to-undirected",
                                            "schaefer-lift",      "qbf-to-node-kayles", "bigraph-to-snort"};
    return k;
}

ReductionOutput reduce_json(const std::string& kind, const json& input) {
    if (std::find(reduction_kinds().begin(), reduction_kinds().end(), kind) == reduction_kinds().end())
        throw Error(ErrorCode::SchemaError, "unknown reduction", kind);
    GameSpec g = game_from_json(input);
    auto need = [&](auto* p, const char* what) {
        if (!p) throw Error(ErrorCode::InvalidInstance, std::string("input must be a ") + what + " instance");
        return p;
    };
    if (kind == "avoid-true-to-nim") {
        auto at = std::dynamic_pointer_cast<const AvoidTrue>(g.ruleset);
        need(at.get(), "avoid_true");
        return avoid_true_to_nim(at, g.start);
    }
    if (kind == "edge-subdivide")
        return geography_edge_subdivision(*need(dynamic_cast<const Geography*>(g.ruleset.get()), "geography"));
    if (kind == "directed-to-undirected")
        return directed_to_undirected_polywide(*need(dynamic_cast<const Geography*>(g.ruleset.get()), "geography"));
    if (kind == "schaefer-lift") return schaefer_lift(*need(dynamic_cast<const Qbf*>(g.ruleset.get()), "qbf"));
    if (kind == "qbf-to-node-kayles")
        return qbf_to_node_kayles(*need(dynamic_cast<const Qbf*>(g.ruleset.get()), "qbf"));
    return bigraph_to_snort(*need(dynamic_cast<const NodeKayles*>(g.ruleset.get()), "node_kayles"));
}

json reduction_game_json(const ReductionOutput& out) {
    json j = out.ruleset->instance_json();
    j["superposition"] = superposition_to_json(*out.ruleset, out.state);
    j["to_move"] = to_string(out.to_move);
    return j;
}

}  // namespace qcg
