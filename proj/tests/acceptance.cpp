// One PASS/FAIL line per primary acceptance criterion. Exits 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qcg/rulesets.hpp"
#include "qcg/solver.hpp"
#include "qcg/verify.hpp"

using namespace qcg;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
    std::string name;
    bool pass = false;
    double seconds = 0;
    std::string note;
};

std::vector<Line> lines;

void report(Line l) {
    std::printf("%s  %-56s %8.2fs  %s\n", l.pass ? "PASS" : "FAIL", l.name.c_str(), l.seconds, l.note.c_str());
    std::fflush(stdout);
    lines.push_back(std::move(l));
}

RulesetPtr nim(std::vector<std::uint32_t> piles) { return std::make_shared<Nim>(std::move(piles)); }

GameState quantum_nim(const std::vector<std::uint32_t>& piles) {
    GameConfig c;  // flavor D, width 2
    return make_state(nim(piles), Superposition(Nim::encode(piles)), Player::Left, c);
}

// Runs a list of named checks under a time limit.
void exact(const std::string& name, double limit, const std::vector<std::pair<std::string, std::function<bool()>>>& cs) {
    const auto t0 = Clock::now();
    std::string bad;
    for (const auto& [what, f] : cs) {
        std::string label = what;
        bool ok = false;
        try {
            ok = f();
        } catch (const std::exception& e) {
            label += std::string(" (") + e.what() + ")";
        }
        if (!ok) bad += (bad.empty() ? "" : "; ") + label;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::string note = bad.empty() ? "exact" : "mismatch: " + bad;
    if (secs > limit) note += " (over " + std::to_string(static_cast<int>(limit)) + "s)";
    report({name, bad.empty() && secs <= limit, secs, note});
}

void suite(const std::string& name, double limit, SuiteReport (*run)(const VerifyOptions&),
           const std::function<std::string(const SuiteReport&)>& extra = {}) {
    const auto t0 = Clock::now();
    SuiteReport r;
    std::string note;
    bool ok = false;
    try {
        r = run(VerifyOptions{});
        ok = r.passed();
        note = std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures";
        if (extra) {
            const std::string e = extra(r);
            if (!e.empty()) {
                ok = false;
                note += ", " + e;
            }
        }
    } catch (const std::exception& e) {
        note = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > limit) {
        ok = false;
        note += " (over " + std::to_string(static_cast<int>(limit)) + "s)";
    }
    report({name, ok, secs, note});
    if (!r.failure_samples.empty()) std::printf("      first failure: %s\n", r.failure_samples.front().dump().c_str());
}

}  // namespace

int main() {
    const QuantumMove split = QuantumMove::make({Nim::move(0, 1), Nim::move(1, 1)});

    exact("nim (2,2): quantum N with split reply, classical P", 1.0,
          {{"quantum (2,2) is N",
            [&] {
                auto r = solve(quantum_nim({2, 2}));
                return r.outcome == Outcome::N && r.best_move && *r.best_move == Move(split);
            }},
           {"split reply is P",
            [&] {
                auto after = apply_quantum(quantum_nim({2, 2}), split);
                auto want = Superposition::from({Nim::encode({1, 2}), Nim::encode({2, 1})});
                return want && after.board == *want && solve(after).outcome == Outcome::P;
            }},
           {"classical (2,2) is P",
            [] { return classical_solve(nim({2, 2}), Nim::encode({2, 2})) == Outcome::P; }}});

    exact("nim (1,2): N both ways, no quantumness", 1.0,
          {{"classical (1,2) is N", [] { return classical_solve(nim({1, 2}), Nim::encode({1, 2})) == Outcome::N; }},
           {"quantum (1,2) is N", [] { return solve(quantum_nim({1, 2})).outcome == Outcome::N; }},
           {"quantumness None", [] {
                return classify_quantumness(nim({1, 2}), Nim::encode({1, 2}), GameConfig{}).kind == Quantumness::None;
            }}});

    exact("nim (3,2) and (4,2): outcomes, move values, quantumness", 10.0,
          {{"quantum (3,2) is P", [] { return solve(quantum_nim({3, 2})).outcome == Outcome::P; }},
           {"quantum (4,2) is N", [] { return solve(quantum_nim({4, 2})).outcome == Outcome::N; }},
           {"taking 2 from (4,2) is not winning",
            [] { return solve(apply_classical(quantum_nim({4, 2}), Nim::move(0, 2))).outcome == Outcome::N; }},
           {"taking 1 from (4,2) is winning",
            [] { return solve(apply_classical(quantum_nim({4, 2}), Nim::move(0, 1))).outcome == Outcome::P; }},
           {"(4,2) quantumness Weak",
            [] {
                return classify_quantumness(nim({4, 2}), Nim::encode({4, 2}), GameConfig{}).kind == Quantumness::Weak;
            }},
           {"(2,2) quantumness Strong", [] {
                return classify_quantumness(nim({2, 2}), Nim::encode({2, 2}), GameConfig{}).kind == Quantumness::Strong;
            }}});

    suite("undirected geography: outcome and hero strategy", 600, verify_geography);
    suite("polynomial-space solver agrees with memoized", 600, verify_polyspace);
    suite("reduction equivalences", 600, verify_reductions);
    suite("phantom-move QSAT strategy observations", 600, verify_qbf);
    suite("acyclic geography: quantum equals classical", 600, verify_dag);
    suite("core properties, each over 1000 cases", 600, verify_properties, [](const SuiteReport& r) {
        std::string thin;
        const json per = r.detail.value("per_property", json::object());
        if (per.size() < 6) thin = "only " + std::to_string(per.size()) + " properties";
        for (const auto& [k, v] : per.items())
            if (v.get<std::size_t>() < 1000) thin += (thin.empty() ? "" : ", ") + k + " has " + v.dump();
        return thin;
    });
    suite("closed-form and brute-force oracles", 600, verify_oracles);

    int failed = 0;
    for (const auto& l : lines) failed += !l.pass;
    std::printf("%zu criteria, %d failed\n", lines.size(), failed);
    return failed ? 1 : 0;
}
