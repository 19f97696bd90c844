#pragma once

#include <string>
#include <vector>

namespace multspec {

// One line of the `verify` summary table.  `pass` is the judged outcome;
// `measure` and `limit` document what was compared (the name says in which
// direction when it is not "measure <= limit").
struct VerifyRow {
    std::string suite;
    std::string name;
    double measure = 0.0;
    double limit = 0.0;
    bool pass = false;
};

// Runs one named invariant suite: "stirling", "parseval", "chu",
// "exponents", "decay", "quotient", or "all" (concatenation).  Unknown
// names throw std::invalid_argument.
std::vector<VerifyRow> run_verify_suite(const std::string& suite);

// Entry point of the command-line tool, exposed for tests.  Exit codes:
// 0 success, 1 verification failure, 2 parse/config error, 3 requested
// symbol/space pair outside the hypotheses of the implemented theorems.
int run_cli(int argc, const char* const* argv);

}  // namespace multspec
