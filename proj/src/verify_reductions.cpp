#include <bit>
#include <chrono>
#include <functional>

#include "gen.hpp"
#include "qcg/reductions.hpp"
#include "qcg/verify.hpp"

namespace qcg {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs one equivalence case; exceptions count as failures.
void pair_case(SuiteReport& rep, json& tally, const std::string& group, const std::function<json()>& body) {
    ++rep.cases;
    tally[group] = tally.value(group, 0) + 1;
    try {
        json bad = body();
        if (!bad.is_null()) {
            bad["reduction"] = group;
            rep.fail(bad);
        }
    } catch (const std::exception& e) {
        rep.fail({{"reduction", group}, {"error", e.what()}});
    }
}

std::shared_ptr<AvoidTrue> random_avoid_true(gen::Rng& r) {
    const int n = gen::between(r, 1, 4);
    return std::make_shared<AvoidTrue>(gen::letters(n), gen::positive_cnf(r, n, 3), (std::uint64_t{1} << n) - 1);
}

// Random free sets that keep at least one clause active.
Superposition random_avoid_true_board(gen::Rng& r, const AvoidTrue& at) {
    const std::uint64_t all = at.initial_free();
    std::vector<Position> ps{AvoidTrue::encode(all)};
    if (gen::coin(r)) {
        const std::uint64_t f = all & ~(std::uint64_t{1} << gen::below(r, at.variables().size()));
        if (at.has_active_clause(f)) ps.push_back(AvoidTrue::encode(f));
    }
    return *Superposition::from(ps);
}

std::vector<Literal> random_clause(gen::Rng& r, int vars) {
    std::vector<Literal> c;
    const int k = gen::between(r, 1, std::min(3, vars));
    std::vector<int> pick(vars);
    for (int i = 0; i < vars; ++i) pick[i] = i;
    std::shuffle(pick.begin(), pick.end(), r);
    for (int i = 0; i < k; ++i) c.push_back({pick[i], gen::coin(r)});
    return c;
}

std::shared_ptr<Qbf> random_qsat(gen::Rng& r, int m, int max_clauses) {
    std::vector<std::string> tv, fv;
    for (int i = 1; i <= m; ++i) {
        tv.push_back("T" + std::to_string(i));
        fv.push_back("F" + std::to_string(i));
    }
    std::vector<std::vector<Literal>> cl;
    const int k = gen::between(r, 1, max_clauses);
    for (int i = 0; i < k; ++i) cl.push_back(random_clause(r, 2 * m));
    return std::make_shared<Qbf>(QbfFamily::Qsat, QbfVariant::Phantom, tv, fv, cl, true);
}

std::shared_ptr<NodeKayles> random_bigraph(gen::Rng& r, int n, bool cross_only) {
    std::vector<Color> colors(n);
    for (auto& c : colors) c = gen::coin(r) ? Color::Blue : Color::Red;
    Graph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((!cross_only || colors[a] != colors[b]) && gen::coin(r, 0.5)) g.add_edge(a, b);
    return std::make_shared<NodeKayles>(gen::letters(n), g.adj, KaylesVariant::Bigraph, colors, NodeKayles::State{});
}

GameState start_of(RulesetPtr rs, const Superposition& b, const GameConfig& cfg) {
    return make_state(std::move(rs), b, Player::Left, cfg);
}

json failure(const ReductionReport& rep, const json& instance) {
    json j = rep.to_json();
    j["instance"] = instance;
    return j;
}

}  // namespace

SuiteReport verify_reductions(const VerifyOptions& o) {
    SuiteReport rep;
    rep.name = "reductions";
    rep.seed = o.seed;
    const auto t0 = Clock::now();
    gen::Rng r(o.seed);
    json tally = json::object();
    json timings = json::object();
    GameConfig d;
    auto scale = [&](std::size_t base) { return o.count ? std::max<std::size_t>(1, *o.count * base / 50) : base; };

    // Avoid True to Nim, plus a corrupted target that must disagree somewhere.
    auto t = Clock::now();
    std::size_t mutants = 0, mutants_caught = 0, cprime_disagree = 0;
    for (std::size_t i = 0, n = scale(50); i < n; ++i) {
        auto at = random_avoid_true(r);
        const Superposition board = random_avoid_true_board(r, *at);
        pair_case(rep, tally, "avoid-true-to-nim", [&]() -> json {
            auto out = avoid_true_to_nim(at, board);
            auto res = verify_reduction(start_of(at, board, d), out, d);
            for (Flavor f : {Flavor::C, Flavor::CPrime}) {
                GameConfig c;
                c.flavor = f;
                if (!verify_reduction(start_of(at, board, c), out, c).agree) ++cprime_disagree;
            }
            // Flip one pile in one realization.
            auto rs = out.state.realizations();
            auto piles = Nim::decode(rs[i % rs.size()]);
            piles[i % piles.size()] ^= 1;
            rs[i % rs.size()] = Nim::encode(piles);
            ReductionOutput bad = out;
            bad.state = *Superposition::from(rs);
            ++mutants;
            if (!verify_reduction(start_of(at, board, d), bad, d).agree) ++mutants_caught;
            return res.agree ? json() : failure(res, at->instance_json());
        });
    }
    ++rep.cases;
    if (mutants_caught == 0) rep.fail({{"reduction", "avoid-true-to-nim"}, {"check", "mutation never detected"}});
    timings["avoid-true-to-nim"] = since(t);

    // Edge subdivision against the classical source.
    t = Clock::now();
    for (std::size_t i = 0, n = scale(50); i < n; ++i) {
        const int v = gen::between(r, 1, 4);
        auto g = gen::geography(gen::random_digraph(r, v, 4), true, gen::between(r, 0, v - 1));
        pair_case(rep, tally, "edge-subdivide", [&]() -> json {
            auto out = geography_edge_subdivision(*g);
            auto res = verify_reduction(start_of(g, *Superposition::from(g->start()), d), out, d, {},
                                        Relation::SameOutcome, true);
            return res.agree ? json() : failure(res, g->instance_json());
        });
    }
    timings["edge-subdivide"] = since(t);

    // Directed quantum source to the poly-wide undirected superposition.
    t = Clock::now();
    for (std::size_t i = 0, n = scale(30); i < n; ++i) {
        const int v = gen::between(r, 1, 3);
        auto g = gen::geography(gen::random_digraph(r, v, 3), true, gen::between(r, 0, v - 1));
        pair_case(rep, tally, "directed-to-undirected", [&]() -> json {
            auto out = directed_to_undirected_polywide(*g);
            auto res = verify_reduction(start_of(g, *Superposition::from(g->start()), d), out, d);
            return res.agree ? json() : failure(res, g->instance_json());
        });
    }
    timings["directed-to-undirected"] = since(t);

    // Schaefer lift: True is the first player on both sides. Target variable
    // parity is tallied since the destiny argument assumes an even total.
    t = Clock::now();
    json schaefer_parity = json::object();
    for (std::size_t i = 0, n = scale(20); i < n; ++i) {
        auto q = random_qsat(r, gen::between(r, 1, 2), 2);
        pair_case(rep, tally, "schaefer-lift", [&]() -> json {
            auto out = schaefer_lift(*q);
            const std::size_t vars = static_cast<const AvoidTrue&>(*out.ruleset).variables().size();
            const char* parity = vars % 2 ? "odd" : "even";
            schaefer_parity[parity] = schaefer_parity.value(parity, 0) + 1;
            auto res = verify_reduction(start_of(q, *Superposition::from(q->start()), d), out, d, {},
                                        Relation::FirstPlayerWins);
            if (res.agree) return json();
            const std::string key = std::string(parity) + "_disagree";
            schaefer_parity[key] = schaefer_parity.value(key, 0) + 1;
            json j = failure(res, q->instance_json());
            j["target_variables"] = vars;
            return j;
        });
    }
    timings["schaefer-lift"] = since(t);

    // QBF to Node Kayles on every formula with one or two variables and at
    // most two distinct clauses.
    t = Clock::now();
    std::size_t qbf_true = 0;
    for (int vars = 1; vars <= 2; ++vars) {
        std::vector<std::vector<Literal>> all;
        const int lits = 2 * vars;
        for (int mask = 1; mask < (1 << lits); ++mask) {
            std::vector<Literal> c;
            for (int l = 0; l < lits; ++l)
                if (mask >> l & 1) c.push_back({l / 2, l % 2 == 1});
            all.push_back(c);
        }
        std::vector<std::vector<std::vector<Literal>>> formulas{{}};
        for (std::size_t a = 0; a < all.size(); ++a) {
            formulas.push_back({all[a]});
            for (std::size_t b = a + 1; b < all.size(); ++b) formulas.push_back({all[a], all[b]});
        }
        std::vector<std::string> tv{"x1"}, fv;
        if (vars == 2) fv.push_back("x2");
        for (const auto& f : formulas) {
            // The selector game itself requires True to move last, so the
            // unpadded source only carries the formula.
            auto q = std::make_shared<Qbf>(QbfFamily::Qbf, QbfVariant::Phantom, tv, fv, f);
            pair_case(rep, tally, "qbf-to-node-kayles", [&]() -> json {
                auto out = qbf_to_node_kayles(*q);
                const bool truth = qbf_truth(*q);
                qbf_true += truth;
                Solver s;
                const bool first = s.wins(out.game(d));
                if (first == truth) return json();
                return {{"instance", q->instance_json()}, {"truth", truth}, {"first_player_wins", first}};
            });
        }
    }
    timings["qbf-to-node-kayles"] = since(t);

    // Bigraph Node Kayles to Snort, partizan outcomes, flavors D and C'.
    t = Clock::now();
    std::size_t same_colour_disagree = 0;
    for (std::size_t i = 0, n = scale(30); i < n; ++i) {
        auto nk = random_bigraph(r, gen::between(r, 1, 5), true);
        for (Flavor f : {Flavor::D, Flavor::CPrime}) {
            GameConfig c;
            c.flavor = f;
            pair_case(rep, tally, "bigraph-to-snort", [&]() -> json {
                auto out = bigraph_to_snort(*nk);
                auto res = verify_reduction(start_of(nk, *Superposition::from(nk->start()), c), out, c);
                if (res.agree) return json();
                json j = failure(res, nk->instance_json());
                j["flavor"] = to_string(f);
                return j;
            });
        }
        // Same-colour edges are outside the construction's scope; only counted.
        auto loose = random_bigraph(r, gen::between(r, 2, 5), false);
        auto out = bigraph_to_snort(*loose);
        if (!verify_reduction(start_of(loose, *Superposition::from(loose->start()), d), out, d).agree)
            ++same_colour_disagree;
    }
    timings["bigraph-to-snort"] = since(t);

    pair_case(rep, tally, "identity", [&]() -> json {
        auto rs = std::make_shared<Nim>(std::vector<std::uint32_t>{2, 2});
        const Superposition b(Nim::encode({2, 2}));
        auto res = verify_reduction(start_of(rs, b, d), identity_reduction(rs, b), d);
        return res.agree ? json() : res.to_json();
    });

    rep.detail = {{"per_reduction", tally},
                  {"timings", timings},
                  {"mutants", mutants},
                  {"mutants_detected", mutants_caught},
                  {"avoid_true_flavor_c_or_cprime_disagreements", cprime_disagree},
                  {"qbf_true_formulas", qbf_true},
                  {"schaefer_target_parity", schaefer_parity},
                  {"snort_same_colour_edge_disagreements", same_colour_disagree}};
    rep.seconds = since(t0);
    return rep;
}

// ---- phantom-move strategy observations ----

namespace {

// False (the phantom-move player here) plays <(v,false)|(v,true)> on its
// lowest unassigned variable, or the first legal move when that is illegal.
std::optional<Move> quantum_false_move(const Qbf& q, const GameState& s) {
    const auto st = q.decode(s.board.realizations().front());
    for (std::size_t v = q.true_count(); v < q.var_count(); ++v) {
        if (st.value[v] != 0) continue;
        const auto a = Qbf::encode_move({Qbf::Kind::Assign, static_cast<std::uint16_t>(v), false, false});
        const auto b = Qbf::encode_move({Qbf::Kind::Assign, static_cast<std::uint16_t>(v), true, false});
        Move m(QuantumMove::make({a, b}));
        try {
            apply_move(s, m);
            return m;
        } catch (const Error&) {
        }
        break;
    }
    auto ms = legal_moves(s);
    if (ms.empty()) return std::nullopt;
    return ms.front();
}

bool false_strategy_wins(const Qbf& q, const GameState& s) {
    if (s.to_move == Player::Left) {
        for (const auto& m : legal_moves(s))
            if (!false_strategy_wins(q, apply_move(s, m))) return false;
        return true;  // True stuck, or every reply loses
    }
    auto m = quantum_false_move(q, s);
    return m && false_strategy_wins(q, apply_move(s, *m));
}

// True assigns its variables classically in index order with fixed values.
bool oblivious_true_wins(const Qbf& q, const GameState& s, std::uint32_t sigma) {
    if (s.to_move == Player::Right) {
        for (const auto& m : legal_moves(s))
            if (!oblivious_true_wins(q, apply_move(s, m), sigma)) return false;
        return true;
    }
    const auto st = q.decode(s.board.realizations().front());
    for (std::size_t v = 0; v < q.true_count(); ++v) {
        if (st.value[v] != 0) continue;
        const Label l = Qbf::encode_move({Qbf::Kind::Assign, static_cast<std::uint16_t>(v), (sigma >> v & 1) != 0, false});
        try {
            return oblivious_true_wins(q, apply_classical(s, l), sigma);
        } catch (const Error&) {
            return false;
        }
    }
    return false;
}

}  // namespace

SuiteReport verify_qbf(const VerifyOptions& o) {
    SuiteReport rep;
    rep.name = "qbf";
    rep.seed = o.seed;
    const auto t0 = Clock::now();
    gen::Rng r(o.seed);
    GameConfig d;
    std::size_t false_wins = 0, true_wins = 0;
    const std::size_t count = o.count.value_or(300);
    for (std::size_t i = 0; i < count; ++i) {
        auto q = random_qsat(r, gen::between(r, 1, 2), 3);
        ++rep.cases;
        try {
            const GameState s = make_state(q, *Superposition::from(q->start()), Player::Left, d);
            Solver solver;
            if (solver.wins(s)) {
                ++true_wins;
                bool found = false;
                for (std::uint32_t sigma = 0; sigma < (1u << q->true_count()) && !found; ++sigma)
                    found = oblivious_true_wins(*q, s, sigma);
                if (!found) rep.fail({{"check", "oblivious True assignment"}, {"instance", q->instance_json()}});
            } else {
                ++false_wins;
                if (!false_strategy_wins(*q, s))
                    rep.fail({{"check", "all-quantum False strategy"}, {"instance", q->instance_json()}});
            }
        } catch (const std::exception& e) {
            rep.fail({{"instance", q->instance_json()}, {"error", e.what()}});
        }
    }
    rep.detail = {{"true_wins", true_wins}, {"false_wins", false_wins}};
    rep.seconds = since(t0);
    return rep;
}

}  // namespace qcg
