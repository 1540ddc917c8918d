#pragma once

#include <afy/exact_real.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afy {

// One verification suite: a named batch of exact identities or seeded
// statistics with a hard verdict.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    std::size_t samples = 0;         // 0 keeps each suite's full budget
    std::optional<ExactReal> alpha;  // restrict the suites that scan a set of alphas
    std::uint64_t seed = 2026;
};

// Registered suite names in report order.
std::vector<std::string> check_names();

// Run one suite by registered name (a few documented aliases are
// accepted); DomainError on unknown names.
CheckResult run_check(const std::string& name, const VerifyOptions& opt);

std::vector<CheckResult> run_all_checks(const VerifyOptions& opt);

}  // namespace afy
