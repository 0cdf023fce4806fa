#include <bit>
#include <chrono>

#include "gen.hpp"
#include "qcg/solver.hpp"
#include "qcg/verify.hpp"

namespace qcg {

namespace {

std::string transcript_text(const HeroSession& h) {
    std::string out;
    for (const auto& r : h.transcript()) {
        if (!out.empty()) out += ' ';
        out += move_text(h.geography(), r.move);
    }
    return out;
}

struct Harness {
    SuiteReport& rep;
    json graph;
    std::size_t leaves = 0;
    std::size_t transfer_checks = 0;

    // Matching transfer: an overlay edge in some maximum matching of the
    // overlay without the token class is, in every realization where both
    // endpoints are unvisited, an edge of some maximum matching of the
    // unvisited graph.
    void check_transfer(const HeroSession& h) {
        const auto& classes = h.classes();
        const int token = h.token_class();
        std::vector<std::uint64_t> rest;
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (static_cast<int>(k) != token) rest.push_back(classes[k]);
        Graph o(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j) {
                bool all = true;
                for (std::uint64_t xs = rest[i]; xs && all; xs &= xs - 1)
                    all = (h.graph().adj[std::countr_zero(xs)] & rest[j]) == rest[j];
                if (all) o.add_edge(static_cast<int>(i), static_cast<int>(j));
            }
        const Graph& g = h.graph();
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j) {
                if (!o.edge(static_cast<int>(i), static_cast<int>(j)) ||
                    !edge_in_some_max_matching(o, static_cast<int>(i), static_cast<int>(j)))
                    continue;
                for (const auto& p : h.state().board.realizations()) {
                    const auto st = Geography::decode(p);
                    const std::uint64_t open = g.all() & ~st.visited;
                    for (std::uint64_t as = rest[i] & open; as; as &= as - 1)
                        for (std::uint64_t bs = rest[j] & open; bs; bs &= bs - 1) {
                            const int a = std::countr_zero(as), b = std::countr_zero(bs);
                            ++transfer_checks;
                            if (!edge_in_some_max_matching(g, a, b, open))
                                rep.fail({{"check", "matching transfer"}, {"graph", graph},
                                          {"moves", transcript_text(h)},
                                          {"edge", {h.geography().vertices()[a], h.geography().vertices()[b]}}});
                        }
                }
            }
    }

    // Villain to move: tries every legal move and recurses on the hero's reply.
    void villain(const HeroSession& h) {
        const auto moves = legal_moves(h.state());
        if (moves.empty()) {
            ++leaves;
            return;
        }
        for (const auto& m : moves) {
            HeroSession next = h;
            try {
                next.respond(m);
            } catch (const Error& e) {
                rep.fail({{"check", "hero never loses"}, {"graph", graph},
                          {"moves", transcript_text(next)}, {"error", e.what()}});
                continue;
            }
            if (!next.invariant_holds())
                rep.fail({{"check", "invariant"}, {"graph", graph}, {"moves", transcript_text(next)}});
            check_transfer(next);
            villain(next);
        }
    }
};

json graph_json(const Graph& g) {
    json edges = json::array();
    const auto names = gen::letters(g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b)
            if (g.edge(static_cast<int>(a), static_cast<int>(b))) edges.push_back({names[a], names[b]});
    return {{"vertices", names}, {"edges", edges}};
}

}  // namespace

SuiteReport verify_geography(const VerifyOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    rep.name = "geography";
    rep.seed = o.seed;
    gen::Rng rng(o.seed);
    const std::size_t count = o.count.value_or(200);
    GameConfig cfg;
    std::size_t starts = 0, n_wins = 0, leaves = 0, transfers = 0;
    // The main sample stays within six vertices; a tenth as many seven- and
    // eight-vertex graphs extend the matching transfer check.
    const std::size_t large = count / 10;
    for (std::size_t t = 0; t < count + large; ++t) {
        const Graph g = t < count ? gen::connected_graph(rng, 1, 6) : gen::connected_graph(rng, 7, 8);
        for (int s = 0; s < static_cast<int>(g.size()); ++s) {
            ++starts;
            ++rep.cases;
            auto rs = gen::geography(g.adj, false, s);
            json where = graph_json(g);
            where["start"] = gen::letters(g.size())[s];
            const Outcome classical = classical_ug_outcome(g, s);
            const Outcome quantum = solve(make_state(rs, Superposition(rs->start().front()), Player::Left, cfg)).outcome;
            if (classical == Outcome::N) ++n_wins;
            if (quantum != classical)
                rep.fail({{"check", "outcome"}, {"graph", where}, {"classical", to_string(classical)},
                          {"quantum", to_string(quantum)}});
            Harness hz{rep, where};
            try {
                auto h = HeroSession::begin(rs, cfg);
                if (h.hero() == Player::Left) h.first_move();
                if (!h.invariant_holds()) rep.fail({{"check", "invariant"}, {"graph", where}, {"moves", "opening"}});
                hz.villain(h);
            } catch (const Error& e) {
                rep.fail({{"check", "hero opening"}, {"graph", where}, {"error", e.what()}});
            }
            leaves += hz.leaves;
            transfers += hz.transfer_checks;
        }
    }
    rep.detail = {{"graphs", count}, {"large_graphs", large},        {"starts", starts},        {"classical_n", n_wins},
                  {"adversary_leaves", leaves}, {"matching_transfer_checks", transfers}};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace qcg
