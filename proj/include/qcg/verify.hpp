#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcg/ruleset.hpp"

namespace qcg {

struct VerifyOptions {
    std::uint64_t seed = 7;
    // Overrides the suite's default sample size where it has one.
    std::optional<std::size_t> count;
};

struct SuiteReport {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double seconds = 0;
    std::vector<json> failure_samples;  // at most kMaxSamples
    json detail = json::object();

    static constexpr std::size_t kMaxSamples = 20;

    bool passed() const noexcept { return failures == 0; }
    void fail(json what);
    json to_json() const;
};

// Regression checks on the worked Nim examples.
SuiteReport verify_figures(const VerifyOptions& o = {});
// Quantum undirected geography: outcome equality and the hero strategy
// against an exhaustive adversary, plus the matching transfer property.
SuiteReport verify_geography(const VerifyOptions& o = {});
// Polynomial-space solver against the memoized solver.
SuiteReport verify_polyspace(const VerifyOptions& o = {});
// Every reduction's equivalence harness.
SuiteReport verify_reductions(const VerifyOptions& o = {});
// Phantom-move QSAT strategy observations.
SuiteReport verify_qbf(const VerifyOptions& o = {});
// Acyclic geography: quantum outcome equals classical.
SuiteReport verify_dag(const VerifyOptions& o = {});
// Randomized core properties.
SuiteReport verify_properties(const VerifyOptions& o = {});
// Closed-form and brute-force oracles.
SuiteReport verify_oracles(const VerifyOptions& o = {});

const std::vector<std::string>& suite_names();
// Runs one named suite, or every suite for "all". Unknown names raise SchemaError.
std::vector<SuiteReport> run_suites(const std::string& name, const VerifyOptions& o = {});
json reports_to_json(const std::vector<SuiteReport>& rs);

}  // namespace qcg
