#include "doctest.h"
#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"

using namespace qcg;

namespace {

RulesetPtr nim(std::vector<std::uint32_t> piles) { return std::make_shared<Nim>(std::move(piles)); }

GameState quantum(std::vector<std::uint32_t> piles, int w = 2) {
    GameConfig c;
    c.width = w;
    return make_state(nim(piles), Superposition(Nim::encode(piles)), Player::Left, c);
}

Label M(int pile, std::uint32_t take) { return Nim::move(pile, take); }

}  // namespace

TEST_CASE("quantum Nim (2,2) is N with a quantum best move") {
    auto r = solve(quantum({2, 2}));
    CHECK(r.outcome == Outcome::N);
    REQUIRE(r.best_move);
    CHECK(*r.best_move == Move(QuantumMove::make({M(0, 1), M(1, 1)})));
    auto after = apply_move(quantum({2, 2}), *r.best_move);
    CHECK(solve(after).outcome == Outcome::P);
}

TEST_CASE("classical results") {
    auto rs = nim({2, 2});
    CHECK(classical_solve(rs, Nim::encode({2, 2})) == Outcome::P);
    CHECK(classical_solve(rs, Nim::encode({1, 2})) == Outcome::N);
    GameConfig demi;
    demi.demi = true;
    CHECK(solve(make_state(rs, Superposition(Nim::encode({2, 2})), Player::Left, demi)).outcome == Outcome::P);
    CHECK(nim_xor_outcome({2, 2}) == Outcome::P);
    CHECK(nim_xor_outcome({1, 2}) == Outcome::N);
    CHECK(nim_xor_outcome({0, 0, 0}) == Outcome::P);
}

TEST_CASE("quantum Nim (3,2) and (4,2)") {
    CHECK(solve(quantum({3, 2})).outcome == Outcome::P);
    CHECK(solve(quantum({4, 2})).outcome == Outcome::N);
    Solver s;
    CHECK(s.wins(apply_classical(quantum({4, 2}), M(0, 2))));
    CHECK_FALSE(s.wins(apply_classical(quantum({4, 2}), M(0, 1))));
}

TEST_CASE("quantumness classes") {
    GameConfig c;
    CHECK(classify_quantumness(nim({2, 2}), Nim::encode({2, 2}), c).kind == Quantumness::Strong);
    CHECK(classify_quantumness(nim({4, 2}), Nim::encode({4, 2}), c).kind == Quantumness::Weak);
    CHECK(classify_quantumness(nim({1, 2}), Nim::encode({1, 2}), c).kind == Quantumness::None);
}

TEST_CASE("resource limits raise instead of guessing") {
    SolveLimits lim;
    lim.max_nodes = 10;
    CHECK_THROWS_AS(solve(quantum({4, 2}), lim), Error);
}

TEST_CASE("qp leaves") {
    auto rs = nim({2, 2});
    std::vector<MoveRecord> one{{QuantumMove::make({M(0, 1), M(1, 1)}), Player::Left}};
    std::vector<Position> got;
    qp_leaves(*rs, Nim::encode({2, 2}), one, [&](const Position& p) {
        got.push_back(p);
        return true;
    });
    CHECK(got == std::vector<Position>{Nim::encode({1, 2}), Nim::encode({2, 1})});
    auto two = one;
    two.push_back({QuantumMove::make({M(0, 1), M(1, 2)}), Player::Right});
    got.clear();
    qp_leaves(*rs, Nim::encode({2, 2}), two, [&](const Position& p) {
        got.push_back(p);
        return true;
    });
    CHECK(got == std::vector<Position>{Nim::encode({0, 2}), Nim::encode({1, 0}), Nim::encode({1, 1})});
}

TEST_CASE("polyspace agrees on Nim (1,1)") {
    GameConfig c;
    // Exhaustive search is the oracle here: (1,1) is a second-player win.
    CHECK(solve(quantum({1, 1})).outcome == Outcome::P);
    CHECK(solve_polyspace(nim({1, 1}), Nim::encode({1, 1}), {}, c, 2) == Outcome::P);
    CHECK_THROWS_AS(solve_polyspace(nim({2, 2}), Nim::encode({2, 2}), {}, c, 1), Error);
}
