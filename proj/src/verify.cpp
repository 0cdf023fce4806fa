#include "qcg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "gen.hpp"
#include "qcg/solver.hpp"

namespace qcg {

void SuiteReport::fail(json what) {
    ++failures;
    if (failure_samples.size() < kMaxSamples) failure_samples.push_back(std::move(what));
}

json SuiteReport::to_json() const {
    return {{"suite", name},         {"seed", seed},      {"cases", cases},
            {"failures", failures},  {"passed", passed()}, {"seconds", seconds},
            {"failure_samples", failure_samples}, {"detail", detail}};
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SuiteReport start(const char* name, const VerifyOptions& o) {
    SuiteReport r;
    r.name = name;
    r.seed = o.seed;
    return r;
}

RulesetPtr nim(std::vector<std::uint32_t> piles) { return std::make_shared<Nim>(std::move(piles)); }

GameState nim_state(const std::vector<std::uint32_t>& piles, bool demi = false) {
    GameConfig c;
    c.demi = demi;
    return make_state(nim(piles), Superposition(Nim::encode(piles)), Player::Left, c);
}

Label M(std::size_t pile, std::uint32_t take) { return Nim::move(pile, take); }

// Runs f, counting one case and turning exceptions into failures.
void check(SuiteReport& rep, const std::string& what, const std::function<bool()>& f) {
    ++rep.cases;
    try {
        if (!f()) rep.fail({{"check", what}});
    } catch (const std::exception& e) {
        rep.fail({{"check", what}, {"error", e.what()}});
    }
}

}  // namespace

// ---- figures ----

SuiteReport verify_figures(const VerifyOptions& o) {
    auto rep = start("figures", o);
    const auto t0 = Clock::now();
    json timings = json::object();
    auto timed = [&](const std::string& group, double limit, const std::function<void()>& body) {
        const auto t = Clock::now();
        body();
        const double secs = since(t);
        timings[group] = secs;
        ++rep.cases;
        if (secs > limit) rep.fail({{"check", group + " time"}, {"seconds", secs}, {"limit", limit}});
    };

    timed("nim 2 2", 1.0, [&] {
        check(rep, "quantum (2,2) is N with <(-1,0)|(0,-1)>", [] {
            auto r = solve(nim_state({2, 2}));
            return r.outcome == Outcome::N && r.best_move &&
                   *r.best_move == Move(QuantumMove::make({M(0, 1), M(1, 1)}));
        });
        check(rep, "reply <(1,2)|(2,1)> is P", [] {
            auto after = apply_quantum(nim_state({2, 2}), QuantumMove::make({M(0, 1), M(1, 1)}));
            auto want = Superposition::from({Nim::encode({1, 2}), Nim::encode({2, 1})});
            return after.board == *want && solve(after).outcome == Outcome::P;
        });
        check(rep, "classical (2,2) is P", [] { return classical_solve(nim({2, 2}), Nim::encode({2, 2})) == Outcome::P; });
    });

    timed("nim 1 2", 1.0, [&] {
        check(rep, "classical (1,2) is N", [] { return classical_solve(nim({1, 2}), Nim::encode({1, 2})) == Outcome::N; });
        check(rep, "quantum (1,2) is N", [] { return solve(nim_state({1, 2})).outcome == Outcome::N; });
        check(rep, "(1,2) quantumness None", [] {
            return classify_quantumness(nim({1, 2}), Nim::encode({1, 2}), GameConfig{}).kind == Quantumness::None;
        });
    });

    timed("nim 3 2 and 4 2", 10.0, [&] {
        check(rep, "quantum (3,2) is P", [] { return solve(nim_state({3, 2})).outcome == Outcome::P; });
        check(rep, "quantum (4,2) is N", [] { return solve(nim_state({4, 2})).outcome == Outcome::N; });
        check(rep, "(-2,0) from (4,2) is not winning", [] {
            auto after = apply_classical(nim_state({4, 2}), M(0, 2));
            return solve(after).outcome == Outcome::N;
        });
        check(rep, "(-1,0) from (4,2) is winning", [] {
            auto after = apply_classical(nim_state({4, 2}), M(0, 1));
            return solve(after).outcome == Outcome::P;
        });
        check(rep, "(4,2) quantumness Weak", [] {
            return classify_quantumness(nim({4, 2}), Nim::encode({4, 2}), GameConfig{}).kind == Quantumness::Weak;
        });
        check(rep, "(2,2) quantumness Strong", [] {
            return classify_quantumness(nim({2, 2}), Nim::encode({2, 2}), GameConfig{}).kind == Quantumness::Strong;
        });
    });
    rep.detail["timings"] = timings;
    rep.seconds = since(t0);
    return rep;
}

// ---- polyspace ----

SuiteReport verify_polyspace(const VerifyOptions& o) {
    auto rep = start("polyspace", o);
    const auto t0 = Clock::now();
    gen::Rng rng(o.seed);
    const std::size_t count = o.count.value_or(100);
    const Flavor flavors[] = {Flavor::D, Flavor::C, Flavor::CPrime, Flavor::B, Flavor::A};
    for (std::size_t t = 0; t < count; ++t) {
        RulesetPtr rs;
        std::size_t height;
        json what;
        if (t % 2 == 0) {
            const int n = gen::between(rng, 1, 6);
            const Graph g = gen::random_graph(rng, n, 0.45);
            rs = std::make_shared<NodeKayles>(gen::letters(n), g.adj, KaylesVariant::Plain, std::vector<Color>{},
                                              NodeKayles::State{});
            height = static_cast<std::size_t>(n);
        } else {
            const int n = gen::between(rng, 1, 5);
            const bool directed = gen::coin(rng);
            std::vector<std::uint64_t> adj =
                directed ? gen::random_digraph(rng, n, n * 2) : gen::random_graph(rng, n, 0.5).adj;
            rs = gen::geography(adj, directed, gen::between(rng, 0, n - 1));
            height = static_cast<std::size_t>(n);
        }
        what = rs->instance_json();
        const Position p = rs->start().front();
        for (Flavor f : flavors) {
            ++rep.cases;
            GameConfig cfg;
            cfg.flavor = f;
            try {
                const Outcome memo = solve(make_state(rs, Superposition(p), Player::Left, cfg)).outcome;
                const Outcome poly = solve_polyspace(rs, p, {}, cfg, height);
                if (memo != poly)
                    rep.fail({{"instance", what}, {"flavor", to_string(f)}, {"solve", to_string(memo)},
                              {"polyspace", to_string(poly)}});
            } catch (const std::exception& e) {
                rep.fail({{"instance", what}, {"flavor", to_string(f)}, {"error", e.what()}});
            }
        }
    }
    rep.detail = {{"instances", count}, {"flavors", 5}};
    rep.seconds = since(t0);
    return rep;
}

// ---- acyclic geography ----

SuiteReport verify_dag(const VerifyOptions& o) {
    auto rep = start("dag", o);
    const auto t0 = Clock::now();
    gen::Rng rng(o.seed);
    const std::size_t count = o.count.value_or(50);
    for (std::size_t t = 0; t < count; ++t) {
        const int n = gen::between(rng, 2, 7);
        auto adj = gen::random_dag(rng, n, 0.45);
        auto rs = gen::geography(adj, true, gen::between(rng, 0, n - 1));
        ++rep.cases;
        const Position p = rs->start().front();
        const Outcome c = classical_solve(rs, p);
        const Outcome q = solve(make_state(rs, Superposition(p), Player::Left, GameConfig{})).outcome;
        if (c != q)
            rep.fail({{"instance", rs->instance_json()}, {"classical", to_string(c)}, {"quantum", to_string(q)}});
    }
    rep.seconds = since(t0);
    return rep;
}

// ---- oracles ----

namespace {

// Size of a maximum matching and whether v is covered by all of them, by
// enumerating every matching.
void enumerate(const Graph& g, int from, std::uint64_t used, std::size_t size, std::vector<std::uint64_t>& covers,
               std::vector<std::size_t>& sizes) {
    covers.push_back(used);
    sizes.push_back(size);
    const int n = static_cast<int>(g.size());
    for (int a = from; a < n; ++a) {
        if (used >> a & 1) continue;
        for (int b = a + 1; b < n; ++b)
            if (!(used >> b & 1) && g.edge(a, b))
                enumerate(g, a + 1, used | (std::uint64_t{1} << a) | (std::uint64_t{1} << b), size + 1, covers, sizes);
    }
}

}  // namespace

SuiteReport verify_oracles(const VerifyOptions& o) {
    auto rep = start("oracles", o);
    const auto t0 = Clock::now();
    std::size_t nim_cases = 0;
    for (int k = 1; k <= 3; ++k) {
        std::vector<std::uint32_t> piles(k, 0);
        for (;;) {
            ++rep.cases;
            ++nim_cases;
            const Outcome want = nim_xor_outcome(piles);
            const Outcome got = classical_solve(nim(piles), Nim::encode(piles));
            if (want != got) rep.fail({{"check", "nim xor"}, {"piles", piles}});
            int i = 0;
            while (i < k && piles[i] == 4) piles[i++] = 0;
            if (i == k) break;
            ++piles[i];
        }
    }
    gen::Rng rng(o.seed);
    const std::size_t graphs = o.count.value_or(500);
    for (std::size_t t = 0; t < graphs; ++t) {
        const int n = gen::between(rng, 1, 7);
        const Graph g = gen::random_graph(rng, n, std::uniform_real_distribution<double>(0.15, 0.85)(rng));
        std::vector<std::uint64_t> covers;
        std::vector<std::size_t> sizes;
        enumerate(g, 0, 0, 0, covers, sizes);
        const std::size_t best = *std::max_element(sizes.begin(), sizes.end());
        std::uint64_t in_all = g.all();
        for (std::size_t i = 0; i < covers.size(); ++i)
            if (sizes[i] == best) in_all &= covers[i];
        ++rep.cases;
        if (max_matching(g).size() != best) rep.fail({{"check", "matching size"}, {"adj", g.adj}});
        for (int v = 0; v < n; ++v) {
            ++rep.cases;
            if (vertex_in_all_max_matchings(g, v) != static_cast<bool>(in_all >> v & 1))
                rep.fail({{"check", "vertex in all"}, {"adj", g.adj}, {"vertex", v}});
        }
    }
    rep.detail = {{"nim_positions", nim_cases}, {"graphs", graphs}};
    rep.seconds = since(t0);
    return rep;
}

// ---- registry ----

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"figures", "geography",  "reductions", "qbf",
                                                "polyspace", "dag",      "properties", "oracles"};
    return names;
}

std::vector<SuiteReport> run_suites(const std::string& name, const VerifyOptions& o) {
    static const std::vector<std::pair<std::string, SuiteReport (*)(const VerifyOptions&)>> table{
        {"figures", verify_figures}, {"geography", verify_geography}, {"reductions", verify_reductions},
        {"qbf", verify_qbf},         {"polyspace", verify_polyspace}, {"dag", verify_dag},
        {"properties", verify_properties}, {"oracles", verify_oracles}};
    std::vector<SuiteReport> out;
    for (const auto& [n, f] : table)
        if (name == "all" || name == n) out.push_back(f(o));
    if (out.empty()) throw Error(ErrorCode::SchemaError, "unknown suite", name);
    return out;
}

json reports_to_json(const std::vector<SuiteReport>& rs) {
    json suites = json::array();
    bool ok = true;
    for (const auto& r : rs) {
        suites.push_back(r.to_json());
        ok = ok && r.passed();
    }
    return {{"passed", ok}, {"suites", suites}};
}

}  // namespace qcg
