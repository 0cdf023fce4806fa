#include "qcg/strategy.hpp"

#include <bit>
#include <deque>

#include "qcg/rulesets.hpp"

namespace qcg {

namespace {

// Edmonds' blossom algorithm, O(V^3), restricted to the `alive` vertices.
class Blossom {
public:
    Blossom(const Graph& g, std::uint64_t alive)
        : g_(g), alive_(alive), n_(static_cast<int>(g.size())), match_(n_, -1), p_(n_), base_(n_), used_(n_),
          blossom_(n_) {}

    std::vector<int> run() {
        // Greedy start, then augment from every exposed vertex.
        for (int v = 0; v < n_; ++v) {
            if (!live(v) || match_[v] != -1) continue;
            for (int u : neighbors(v))
                if (match_[u] == -1) {
                    match_[u] = v;
                    match_[v] = u;
                    break;
                }
        }
        for (int v = 0; v < n_; ++v) {
            if (!live(v) || match_[v] != -1) continue;
            int u = find_path(v);
            while (u != -1) {
                const int pv = p_[u], ppv = match_[pv];
                match_[u] = pv;
                match_[pv] = u;
                u = ppv;
            }
        }
        return match_;
    }

private:
    bool live(int v) const { return alive_ >> v & 1; }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        std::uint64_t m = g_.adj[v] & alive_;
        while (m) {
            out.push_back(std::countr_zero(m));
            m &= m - 1;
        }
        return out;
    }

    int lca(int a, int b) {
        std::vector<char> seen(n_, 0);
        for (;;) {
            a = base_[a];
            seen[a] = 1;
            if (match_[a] == -1) break;
            a = p_[match_[a]];
        }
        for (;;) {
            b = base_[b];
            if (seen[b]) return b;
            b = p_[match_[b]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[v] != b) {
            blossom_[base_[v]] = blossom_[base_[match_[v]]] = 1;
            p_[v] = child;
            child = match_[v];
            v = p_[match_[v]];
        }
    }

    int find_path(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(p_.begin(), p_.end(), -1);
        for (int i = 0; i < n_; ++i) base_[i] = i;
        used_[root] = 1;
        std::deque<int> q{root};
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (int to : neighbors(v)) {
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (to == root || (match_[to] != -1 && p_[match_[to]] != -1)) {
                    const int cur = lca(v, to);
                    std::fill(blossom_.begin(), blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n_; ++i)
                        if (live(i) && blossom_[base_[i]]) {
                            base_[i] = cur;
                            if (!used_[i]) {
                                used_[i] = 1;
                                q.push_back(i);
                            }
                        }
                } else if (p_[to] == -1) {
                    p_[to] = v;
                    if (match_[to] == -1) return to;
                    used_[match_[to]] = 1;
                    q.push_back(match_[to]);
                }
            }
        }
        return -1;
    }

    const Graph& g_;
    std::uint64_t alive_;
    int n_;
    std::vector<int> match_, p_, base_;
    std::vector<char> used_, blossom_;
};

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

}  // namespace

Matching max_matching(const Graph& g, std::uint64_t alive) {
    Matching m;
    m.mate = Blossom(g, alive & g.all()).run();
    for (int v = 0; v < static_cast<int>(g.size()); ++v)
        if (m.mate[v] > v) m.pairs.emplace_back(v, m.mate[v]);
    return m;
}

std::size_t matching_size(const Graph& g, std::uint64_t alive) { return max_matching(g, alive).size(); }

bool vertex_in_all_max_matchings(const Graph& g, int v, std::uint64_t alive) {
    if (!(alive >> v & 1)) return false;
    return matching_size(g, alive & ~bit(v)) < matching_size(g, alive);
}

bool edge_in_some_max_matching(const Graph& g, int a, int b, std::uint64_t alive) {
    if (a == b || !g.edge(a, b) || !(alive >> a & 1) || !(alive >> b & 1)) return false;
    return matching_size(g, alive & ~bit(a) & ~bit(b)) + 1 == matching_size(g, alive);
}

Outcome classical_ug_outcome(const Graph& g, int start, std::uint64_t visited) {
    const std::uint64_t alive = (g.all() & ~visited) | bit(start);
    return vertex_in_all_max_matchings(g, start, alive) ? Outcome::N : Outcome::P;
}

int hero_first_move(const Graph& g, int start, std::uint64_t visited) {
    visited |= bit(start);
    if (classical_ug_outcome(g, start, visited) != Outcome::N)
        throw Error(ErrorCode::NotWinnable, "start position is P");
    const std::uint64_t alive = (g.all() & ~visited) | bit(start);
    for (int x = 0; x < static_cast<int>(g.size()); ++x)
        if ((alive >> x & 1) && x != start && edge_in_some_max_matching(g, start, x, alive)) return x;
    throw Error(ErrorCode::InvariantBroken, "no matched partner for an N start");
}

Graph geography_graph(const Geography& rs) {
    Graph g(rs.vertices().size());
    g.adj = rs.boards().front().adj;
    return g;
}

// ---- hero session ----

HeroSession HeroSession::begin(std::shared_ptr<const Geography> rs, const GameConfig& cfg) {
    if (rs->directed()) throw Error(ErrorCode::InvalidConfig, "hero strategy needs undirected geography");
    if (rs->boards().size() != 1) throw Error(ErrorCode::InvalidConfig, "hero strategy needs a classical start");
    if (cfg.flavor != Flavor::D || cfg.width != 2)
        throw Error(ErrorCode::InvalidConfig, "hero strategy needs flavor D and width 2");
    HeroSession h(make_state(rs, Superposition(rs->start().front()), Player::Left, cfg));
    h.rs_ = rs;
    h.g_ = geography_graph(*rs);
    const int s = rs->start_vertex();
    const std::uint64_t visited = rs->start_visited() | bit(s);
    h.hero_ = classical_ug_outcome(h.g_, s, visited) == Outcome::N ? Player::Left : Player::Right;
    std::uint64_t alive = (h.g_.all() & ~visited) | bit(s);
    while (alive) {
        h.classes_.push_back(bit(std::countr_zero(alive)));
        alive &= alive - 1;
    }
    h.token_ = h.class_of(s);
    return h;
}

int HeroSession::class_of(int v) const {
    for (std::size_t k = 0; k < classes_.size(); ++k)
        if (classes_[k] >> v & 1) return static_cast<int>(k);
    return -1;
}

namespace {

Graph overlay_of(const Graph& g, const std::vector<std::uint64_t>& classes) {
    Graph o(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j) {
            bool all = true;
            std::uint64_t xs = classes[i];
            while (xs && all) {
                const int x = std::countr_zero(xs);
                xs &= xs - 1;
                all = (g.adj[x] & classes[j]) == classes[j];
            }
            if (all) o.add_edge(static_cast<int>(i), static_cast<int>(j));
        }
    return o;
}

int index_of(const std::vector<std::uint64_t>& classes, int v) {
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (classes[k] >> v & 1) return static_cast<int>(k);
    return -1;
}

}  // namespace

Graph HeroSession::overlay() const { return overlay_of(g_, classes_); }

bool HeroSession::invariant_without(const std::vector<std::uint64_t>& classes, int token) const {
    if (token < 0) return false;
    return !vertex_in_all_max_matchings(overlay_of(g_, classes), token);
}

bool HeroSession::invariant_holds() const { return invariant_without(classes_, token_); }

void HeroSession::remove_class(int k) {
    if (k < 0) return;
    classes_.erase(classes_.begin() + k);
    if (token_ == k)
        token_ = -1;
    else if (token_ > k)
        --token_;
}

Label HeroSession::play(int x) {
    Label l = Geography::move_to(x);
    transcript_.push_back({Move(l), state_.to_move});
    state_ = apply_classical(state_, l);
    token_ = class_of(x);
    return l;
}

Label HeroSession::first_move() {
    if (!transcript_.empty() || state_.to_move != hero_)
        throw Error(ErrorCode::IllegalMove, "turn", "the hero does not open this game");
    const int s = rs_->start_vertex();
    const int x = hero_first_move(g_, s, rs_->start_visited());
    remove_class(class_of(s));
    Label l = play(x);
    if (!invariant_holds()) throw Error(ErrorCode::InvariantBroken, "opening breaks the invariant");
    return l;
}

Label HeroSession::respond(const Move& villain) {
    if (state_.to_move == hero_) throw Error(ErrorCode::IllegalMove, "turn", "it is the hero's move");
    GameState after = apply_move(state_, villain);
    transcript_.push_back({villain, state_.to_move});
    state_ = std::move(after);

    remove_class(token_);
    Expansion ex(state_);
    auto feasible = [&](int x) { return ex.find(Geography::move_to(x)) >= 0; };
    if (ex.universe().empty()) throw Error(ErrorCode::InvariantBroken, "hero has no move");

    const int n = static_cast<int>(g_.size());
    const Graph cur = overlay();
    std::optional<Label> reply;

    // Tries x as a reply matched against class `from`; `drop` lists the
    // classes to remove and `merge` the pair to contract afterwards.
    auto attempt = [&](int x, int from, std::vector<int> drop, std::pair<int, int> merge) -> bool {
        const int cx = class_of(x);
        if (cx < 0 || cx == from || cx == merge.second || !feasible(x)) return false;
        if (!edge_in_some_max_matching(cur, from, cx)) return false;
        std::vector<std::uint64_t> next = classes_;
        if (merge.first >= 0) {
            next[merge.first] |= next[merge.second];
            next[merge.second] = 0;
        }
        for (int d : drop) next[d] = 0;
        std::vector<std::uint64_t> compact;
        for (auto c : next)
            if (c) compact.push_back(c);
        const int token = index_of(compact, x);
        if (!invariant_without(compact, token)) return false;
        classes_ = std::move(compact);
        reply = play(x);
        return true;
    };

    if (!villain.quantum()) {
        const int v = Geography::destination(villain.label());
        const int cv = class_of(v);
        if (cv < 0) throw Error(ErrorCode::InvariantBroken, "villain landed outside the overlay");
        for (int x = 0; x < n; ++x)
            if (g_.edge(v, x) && attempt(x, cv, {cv}, {-1, -1})) return *reply;
        throw Error(ErrorCode::InvariantBroken, "no matched reply to a classical move");
    }

    const auto& comps = villain.qmove().components();
    if (comps.size() != 2) throw Error(ErrorCode::IllegalMove, "width");
    const int a = Geography::destination(comps[0]);
    const int b = Geography::destination(comps[1]);
    const int ca = class_of(a), cb = class_of(b);
    if (ca < 0 || cb < 0) throw Error(ErrorCode::InvariantBroken, "villain landed outside the overlay");

    if (ca == cb) {
        for (int x = 0; x < n; ++x)
            if (g_.edge(a, x) && attempt(x, ca, {ca}, {-1, -1})) return *reply;
        throw Error(ErrorCode::InvariantBroken, "no matched reply to a same-class quantum move");
    }
    // Collapsing replies first: x next to one branch only.
    for (int x = 0; x < n; ++x)
        if (g_.edge(a, x) && !g_.edge(b, x) && attempt(x, ca, {ca}, {-1, -1})) return *reply;
    for (int x = 0; x < n; ++x)
        if (g_.edge(b, x) && !g_.edge(a, x) && attempt(x, cb, {cb}, {-1, -1})) return *reply;
    // Otherwise contract the two classes.
    for (int x = 0; x < n; ++x)
        if (g_.edge(a, x) && attempt(x, ca, {}, {ca, cb})) return *reply;
    for (int x = 0; x < n; ++x)
        if (g_.edge(b, x) && attempt(x, cb, {}, {ca, cb})) return *reply;
    throw Error(ErrorCode::InvariantBroken, "no reply keeps the invariant");
}

}  // namespace qcg
