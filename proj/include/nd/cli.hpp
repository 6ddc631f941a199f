#pragma once

#include <iosfwd>

namespace nd {

// Entry point behind the command-line tool. Exit codes: 0 success, 1 usage or
// configuration error, 2 invariant/selftest failure.
int cli_main(int argc, const char* const* argv);

// Fast internal consistency checks; prints one line per failed check.
bool run_selftest(std::ostream& out);

}  // namespace nd
