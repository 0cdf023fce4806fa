#include "doctest.h"
#include "qcg/rulesets.hpp"

using namespace qcg;

namespace {

std::shared_ptr<Nim> nim(std::vector<std::uint32_t> piles) { return std::make_shared<Nim>(std::move(piles)); }

Position P(std::vector<std::uint32_t> piles) { return Nim::encode(piles); }

Superposition S(std::vector<std::vector<std::uint32_t>> ps) {
    std::vector<Position> v;
    for (auto& p : ps) v.push_back(P(p));
    return *Superposition::from(v);
}

// Nim move labels in vector notation: (-t, 0) is pile 0 take t.
Label M(int pile, std::uint32_t take) { return Nim::move(pile, take); }

QuantumMove Q(std::vector<Label> ls) { return QuantumMove::make(std::move(ls)); }

GameState st(std::vector<std::vector<std::uint32_t>> ps, Flavor f = Flavor::D, int w = 2) {
    GameConfig c;
    c.flavor = f;
    c.width = w;
    return make_state(nim({0, 0}), S(ps), Player::Left, c);
}

}  // namespace

TEST_CASE("filter") {
    CHECK_FALSE(filter({std::nullopt, std::nullopt}).has_value());
    auto f = filter({P({1, 2}), P({2, 1}), P({1, 2})});
    REQUIRE(f);
    CHECK(*f == S({{1, 2}, {2, 1}}));
    CHECK(f->width() == 2);
}

TEST_CASE("quantum move on a superposition drops the infeasible image") {
    auto s = apply_quantum(st({{1, 2}, {2, 1}}), Q({M(0, 1), M(1, 2)}));
    CHECK(s.board == S({{0, 2}, {1, 0}, {1, 1}}));
    CHECK(s.to_move == Player::Right);
}

TEST_CASE("apply_classical") {
    auto s = apply_classical(st({{1, 2}, {2, 1}}), M(0, 2));
    CHECK(s.board == S({{0, 1}}));
    CHECK(apply_classical(st({{2, 2}}), M(0, 1)).board == S({{1, 2}}));
    try {
        apply_classical(st({{1, 0}, {0, 1}}, Flavor::C), M(0, 1));
        FAIL("expected IllegalMove");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IllegalMove);
        CHECK(e.reason() == "unsafe");
    }
}

TEST_CASE("apply_quantum") {
    CHECK(apply_quantum(st({{2, 2}}), Q({M(0, 1), M(1, 1)})).board == S({{1, 2}, {2, 1}}));
    CHECK(apply_quantum(st({{1, 1}}), Q({M(0, 1), M(1, 1)})).board == S({{1, 0}, {0, 1}}));
    CHECK_THROWS_AS(QuantumMove::make({M(0, 1)}), Error);
    CHECK_THROWS_AS(QuantumMove::make({M(0, 1), M(0, 1)}), Error);
}

TEST_CASE("quantum errors are distinguishable") {
    GameConfig c;
    c.budget_left = 0;
    auto s = make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c);
    try {
        apply_quantum(s, Q({M(0, 1), M(1, 1)}));
        FAIL("expected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExhausted);
    }
    GameConfig d;
    d.dimension_cap = 1;
    auto s2 = make_state(nim({2, 2}), S({{2, 2}}), Player::Left, d);
    try {
        apply_quantum(s2, Q({M(0, 1), M(1, 1)}));
        FAIL("expected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionCapExceeded);
    }
    try {
        apply_quantum(st({{2, 0}}), Q({M(0, 1), M(1, 1)}));
        FAIL("expected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IllegalMove);
    }
}

TEST_CASE("budgets decrease only on quantum moves") {
    GameConfig c;
    c.budget_left = 2;
    c.budget_right = 1;
    auto s = make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c);
    auto a = apply_quantum(s, Q({M(0, 1), M(1, 1)}));
    CHECK(a.budgets.left == 1);
    CHECK(a.budgets.right == 1);
    auto b = apply_classical(a, M(0, 1));
    CHECK(b.budgets == a.budgets);
}

TEST_CASE("legal classical moves by flavor") {
    std::vector<Label> both{M(0, 1), M(1, 1)};
    CHECK(legal_classical_moves(st({{1, 0}, {0, 1}}, Flavor::D)) == both);
    CHECK(legal_classical_moves(st({{1, 0}, {0, 1}}, Flavor::C)).empty());
    CHECK(legal_classical_moves(st({{1, 0}, {0, 1}}, Flavor::CPrime)).empty());
    CHECK(legal_classical_moves(st({{2, 2}}, Flavor::A)).empty());
    CHECK(legal_classical_moves(st({{0, 2}, {1, 1}}, Flavor::C)) == std::vector<Label>{M(1, 1)});
    // C' ignores terminal realizations.
    CHECK(legal_classical_moves(st({{0, 0}, {1, 0}}, Flavor::CPrime)) == std::vector<Label>{M(0, 1)});
    CHECK(legal_classical_moves(st({{0, 0}, {1, 0}}, Flavor::C)).empty());
}

TEST_CASE("flavor B allows classical moves only without a quantum option") {
    CHECK(legal_classical_moves(st({{2, 2}}, Flavor::B)).empty());
    CHECK(legal_classical_moves(st({{0, 1}}, Flavor::B)) == std::vector<Label>{M(1, 1)});
    GameConfig c;
    c.flavor = Flavor::B;
    c.budget_left = 0;
    auto s = make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c);
    CHECK(legal_classical_moves(s).size() == 4);
    try {
        apply_classical(st({{2, 2}}, Flavor::B), M(0, 1));
        FAIL("expected");
    } catch (const Error& e) {
        CHECK(e.reason() == "quantum-available");
    }
}

TEST_CASE("legal quantum moves") {
    auto q = legal_quantum_moves(st({{2, 2}}));
    REQUIRE(q.size() == 6);
    CHECK(q[0] == Q({M(0, 1), M(0, 2)}));
    CHECK(q[1] == Q({M(0, 1), M(1, 1)}));
    CHECK(q[2] == Q({M(0, 1), M(1, 2)}));
    CHECK(q[3] == Q({M(0, 2), M(1, 1)}));
    CHECK(q[4] == Q({M(0, 2), M(1, 2)}));
    CHECK(q[5] == Q({M(1, 1), M(1, 2)}));
    CHECK(legal_quantum_moves(st({{0, 0}})).empty());
    GameConfig c;
    c.dimension_cap = 1;
    CHECK(legal_quantum_moves(make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c)).empty());
    CHECK(legal_quantum_moves(st({{2, 2}}, Flavor::D, 3)).size() == 6 + 4);
}

TEST_CASE("is_terminal") {
    CHECK(is_terminal(st({{0, 0}})));
    CHECK_FALSE(is_terminal(st({{0, 2}, {1, 1}})));
    CHECK(is_terminal(st({{0, 1}}, Flavor::A)));
}

TEST_CASE("bft") {
    std::vector<MoveRecord> moves{{Q({M(0, 1), M(1, 1)}), Player::Left}, {Q({M(0, 1), M(1, 2)}), Player::Right}};
    GameConfig c;
    auto s = bft(nim({2, 2}), S({{2, 2}}), moves, c);
    CHECK(s.board == S({{0, 2}, {1, 0}, {1, 1}}));
    CHECK(bft(nim({1, 2}), S({{1, 2}}), {}, c).board == S({{1, 2}}));
    try {
        bft(nim({2, 2}), S({{2, 2}}), {{M(0, 2), Player::Left}, {M(0, 2), Player::Right}}, c);
        FAIL("expected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IllegalMove);
        REQUIRE(e.index());
        CHECK(*e.index() == 1);
    }
}

TEST_CASE("canonical keys") {
    auto a = st({{1, 2}, {2, 1}});
    auto b = st({{2, 1}, {1, 2}});
    CHECK(canonical_key(a) == canonical_key(b));
    GameConfig c1, c0;
    c1.budget_left = c1.budget_right = 1;
    c0.budget_left = c0.budget_right = 0;
    CHECK(canonical_key(make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c1)) !=
          canonical_key(make_state(nim({2, 2}), S({{2, 2}}), Player::Left, c0)));
    auto l = make_state(nim({2, 2}), S({{2, 2}}), Player::Left, {});
    auto r = make_state(nim({2, 2}), S({{2, 2}}), Player::Right, {});
    CHECK(canonical_key(l) == canonical_key(r));
}
