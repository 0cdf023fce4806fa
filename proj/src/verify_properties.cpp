#include <algorithm>
#include <chrono>
#include <numeric>

#include "gen.hpp"
#include "qcg/solver.hpp"
#include "qcg/verify.hpp"

namespace qcg {

namespace {

struct Walk {
    GameState start;
    std::vector<MoveRecord> moves;
    GameState end;
};

RulesetPtr random_ruleset(gen::Rng& r) {
    switch (gen::below(r, 4)) {
        case 0: {
            std::vector<std::uint32_t> piles(gen::between(r, 1, 3));
            for (auto& p : piles) p = static_cast<std::uint32_t>(gen::between(r, 0, 3));
            return std::make_shared<Nim>(piles);
        }
        case 1: {
            const int n = gen::between(r, 1, 5);
            return std::make_shared<NodeKayles>(gen::letters(n), gen::random_graph(r, n, 0.4).adj, KaylesVariant::Plain,
                                                std::vector<Color>{}, NodeKayles::State{});
        }
        case 2: {
            const int n = gen::between(r, 1, 5);
            return gen::geography(gen::random_graph(r, n, 0.5).adj, false, gen::between(r, 0, n - 1));
        }
        default: {
            const int n = gen::between(r, 1, 4);
            return std::make_shared<AvoidTrue>(gen::letters(n), gen::positive_cnf(r, n, 3),
                                               (std::uint64_t{1} << n) - 1);
        }
    }
}

GameConfig random_config(gen::Rng& r) {
    GameConfig c;
    const Flavor fs[] = {Flavor::A, Flavor::B, Flavor::C, Flavor::CPrime, Flavor::D};
    c.flavor = fs[gen::below(r, 5)];
    c.width = gen::between(r, 2, 3);
    if (gen::coin(r, 0.2)) c.budget_left = gen::between(r, 0, 2);
    if (gen::coin(r, 0.2)) c.budget_right = gen::between(r, 0, 2);
    return c;
}

Walk random_walk(gen::Rng& r, RulesetPtr rs, const GameConfig& cfg, int max_moves) {
    GameState s = make_state(rs, Superposition(rs->start().front()), Player::Left, cfg);
    Walk w{s, {}, s};
    const int steps = gen::between(r, 0, max_moves);
    for (int i = 0; i < steps; ++i) {
        auto moves = legal_moves(w.end, 64);
        if (moves.empty()) break;
        const Move& m = moves[gen::below(r, moves.size())];
        w.moves.push_back({m, w.end.to_move});
        w.end = apply_move(w.end, m);
    }
    return w;
}

// Nim and geography relabelings applied to a whole game.
GameState permuted_nim(const GameState& s, const std::vector<std::size_t>& perm) {
    const auto& nim = static_cast<const Nim&>(*s.ruleset);
    auto map = [&](const Position& p) {
        auto piles = Nim::decode(p);
        std::vector<std::uint32_t> out(piles.size());
        for (std::size_t i = 0; i < piles.size(); ++i) out[perm[i]] = piles[i];
        return out;
    };
    std::vector<Position> rs;
    for (const auto& p : s.board.realizations()) rs.push_back(Nim::encode(map(p)));
    auto inst = std::make_shared<Nim>(map(nim.start().front()));
    GameState out = make_state(inst, *Superposition::from(rs), s.to_move, s.config);
    out.budgets = s.budgets;
    return out;
}

std::uint64_t permute_mask(std::uint64_t m, const std::vector<std::size_t>& perm) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (m >> i & 1) out |= std::uint64_t{1} << perm[i];
    return out;
}

GameState permuted_geography(const GameState& s, const std::vector<std::size_t>& perm) {
    const auto& g = static_cast<const Geography&>(*s.ruleset);
    std::vector<std::uint64_t> adj(perm.size());
    for (std::size_t v = 0; v < perm.size(); ++v) adj[perm[v]] = permute_mask(g.boards().front().adj[v], perm);
    auto inst = std::make_shared<Geography>(gen::letters(perm.size()), g.directed(),
                                            std::vector<Geography::Board>{{"main", adj}},
                                            static_cast<int>(perm[g.start_vertex()]), 0);
    std::vector<Position> rs;
    for (const auto& p : s.board.realizations()) {
        auto st = Geography::decode(p);
        st.token = static_cast<int>(perm[st.token]);
        st.visited = permute_mask(st.visited, perm);
        rs.push_back(Geography::encode(st));
    }
    GameState out = make_state(inst, *Superposition::from(rs), s.to_move, s.config);
    out.budgets = s.budgets;
    return out;
}

bool subset(const std::vector<Label>& a, const std::vector<Label>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

SuiteReport verify_properties(const VerifyOptions& o) {
    SuiteReport rep;
    rep.name = "properties";
    rep.seed = o.seed;
    const auto t0 = std::chrono::steady_clock::now();
    gen::Rng r(o.seed);
    const std::size_t n = std::max<std::size_t>(o.count.value_or(1000), 1);
    json per = json::object();
    auto count = [&](const char* prop) {
        ++rep.cases;
        per[prop] = per.value(prop, 0) + 1;
    };

    // filter idempotence
    for (std::size_t i = 0; i < n; ++i) {
        count("filter_idempotence");
        std::vector<std::optional<Position>> c(gen::below(r, 7));
        bool any = false;
        for (auto& x : c)
            if (gen::coin(r, 0.7)) {
                x = Position{std::string(1, static_cast<char>(gen::below(r, 4)))};
                any = true;
            }
        auto f = filter(c);
        if (f.has_value() != any) {
            rep.fail({{"property", "filter_idempotence"}, {"case", i}});
            continue;
        }
        if (!f) continue;
        std::vector<std::optional<Position>> again(f->realizations().begin(), f->realizations().end());
        auto g = filter(again);
        const auto& rz = f->realizations();
        if (!g || *g != *f || !std::is_sorted(rz.begin(), rz.end()) ||
            std::adjacent_find(rz.begin(), rz.end()) != rz.end())
            rep.fail({{"property", "filter_idempotence"}, {"case", i}});
    }

    // flavor containment, C within C' within D
    for (std::size_t i = 0; i < n; ++i) {
        count("flavor_containment");
        GameConfig cfg = random_config(r);
        cfg.budget_left.reset();
        cfg.budget_right.reset();
        cfg.flavor = Flavor::D;
        auto w = random_walk(r, random_ruleset(r), cfg, 3);
        auto with = [&](Flavor f) {
            GameState s = w.end;
            s.config.flavor = f;
            return legal_classical_moves(s);
        };
        const auto c = with(Flavor::C), cp = with(Flavor::CPrime), d = with(Flavor::D);
        if (!subset(c, cp) || !subset(cp, d)) rep.fail({{"property", "flavor_containment"}, {"case", i}});
    }

    // impartial outcomes are N or P
    for (std::size_t i = 0; i < n; ++i) {
        count("impartial_outcomes");
        GameConfig cfg = random_config(r);
        cfg.budget_left = cfg.budget_right = std::nullopt;
        auto w = random_walk(r, random_ruleset(r), cfg, 2);
        try {
            const Outcome out = solve(w.end).outcome;
            if (out != Outcome::N && out != Outcome::P)
                rep.fail({{"property", "impartial_outcomes"}, {"case", i}, {"outcome", to_string(out)}});
        } catch (const Error& e) {
            rep.fail({{"property", "impartial_outcomes"}, {"case", i}, {"error", e.what()}});
        }
    }

    // relabeling symmetry
    for (std::size_t i = 0; i < n; ++i) {
        count("relabeling_symmetry");
        GameConfig cfg = random_config(r);
        RulesetPtr rs;
        std::size_t size;
        const bool use_nim = i % 2 == 0;
        if (use_nim) {
            std::vector<std::uint32_t> piles(gen::between(r, 1, 3));
            for (auto& p : piles) p = static_cast<std::uint32_t>(gen::between(r, 0, 3));
            size = piles.size();
            rs = std::make_shared<Nim>(piles);
        } else {
            const int v = gen::between(r, 1, 5);
            size = static_cast<std::size_t>(v);
            rs = gen::geography(gen::random_graph(r, v, 0.5).adj, false, gen::between(r, 0, v - 1));
        }
        auto w = random_walk(r, rs, cfg, 2);
        std::vector<std::size_t> perm(size);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), r);
        const GameState q = use_nim ? permuted_nim(w.end, perm) : permuted_geography(w.end, perm);
        const Outcome a = solve(w.end).outcome, b = solve(q).outcome;
        if (a != b || legal_classical_moves(w.end).size() != legal_classical_moves(q).size())
            rep.fail({{"property", "relabeling_symmetry"}, {"case", i}});
    }

    // width bound s * w^T
    for (std::size_t i = 0; i < n; ++i) {
        count("width_bound");
        GameConfig cfg = random_config(r);
        cfg.budget_left = cfg.budget_right = std::nullopt;
        std::vector<std::uint32_t> base(gen::between(r, 1, 3));
        for (auto& p : base) p = static_cast<std::uint32_t>(gen::between(r, 1, 4));
        auto rs = std::make_shared<Nim>(base);
        std::vector<Position> start;
        const int s0 = gen::between(r, 1, 3);
        for (int k = 0; k < s0; ++k) {
            auto p = base;
            for (auto& x : p) x = static_cast<std::uint32_t>(gen::between(r, 0, static_cast<int>(x)));
            start.push_back(Nim::encode(p));
        }
        GameState s = make_state(rs, *Superposition::from(start), Player::Left, cfg);
        const std::size_t s_width = s.board.width();
        std::size_t bound = s_width;
        const int steps = gen::between(r, 0, 4);
        for (int t = 0; t < steps; ++t) {
            auto moves = legal_moves(s, 64);
            if (moves.empty()) break;
            s = apply_move(s, moves[gen::below(r, moves.size())]);
            bound *= static_cast<std::size_t>(cfg.width);
            if (s.board.width() > bound) {
                rep.fail({{"property", "width_bound"}, {"case", i}, {"width", s.board.width()}, {"bound", bound}});
                break;
            }
        }
    }

    // replay determinism and budget conservation
    for (std::size_t i = 0; i < n; ++i) {
        count("replay_determinism");
        GameConfig cfg = random_config(r);
        auto w = random_walk(r, random_ruleset(r), cfg, 4);
        const auto a = bft(w.start.ruleset, w.start.board, w.moves, cfg, Player::Left);
        const auto b = bft(w.start.ruleset, w.start.board, w.moves, cfg, Player::Left);
        if (canonical_key(a) != canonical_key(w.end) || canonical_key(a) != canonical_key(b))
            rep.fail({{"property", "replay_determinism"}, {"case", i}});
        Budgets want{cfg.budget_left, cfg.budget_right};
        for (const auto& m : w.moves)
            if (m.move.quantum() && want.of(m.player)) --*want.of(m.player);
        if (!(a.budgets == want)) rep.fail({{"property", "budget_conservation"}, {"case", i}});
    }

    rep.detail = {{"per_property", per}};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace qcg
