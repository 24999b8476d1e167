#pragma once

// Command-line surface over the text formats.  Exit codes: 0 success /
// property holds, 1 decided-negative (NO verdict, non-member, unsatisfied
// formula, failed verification, counterexample found), 2 usage or input
// error, 3 internal inconsistency (a proof-claimed property failed at
// runtime).

#include <iosfwd>
#include <string>
#include <vector>

namespace fl {

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
// `argv` includes the program name, as main() receives it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fl
