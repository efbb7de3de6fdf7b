#pragma once

#include <iosfwd>

namespace relcalc {

/// Entry point of the relcalc command line tool. Exit codes: 0 all checks
/// passed, 1 a negative verdict, 2 bad input or usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relcalc
