// Built-in invariant suite: every structural property the solver relies on,
// exercised on small fixed configurations with a fixed seed, one named check
// per property. The CLI `selftest` subcommand prints one PASS/FAIL line per
// check.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccs {

// Fault injection for suite-sensitivity tests: flipping the sign of chi in
// the rescaled comparison field makes the lemma14-comparison check fail.
struct SelftestOptions {
    bool fault_flip_chi_sign = false;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // empty on pass
};

std::vector<CheckResult> run_selftest_checks(const SelftestOptions& options = {});

// Prints "<name>: PASS|FAIL" lines plus a summary; true iff all checks pass.
bool run_selftest(std::ostream& out, const SelftestOptions& options = {});

} // namespace ccs
