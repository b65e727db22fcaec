#pragma once

#include <iosfwd>

namespace featred {

// Exit codes: 0 success, 1 domain/parse/usage errors, 2 budget exhaustion,
// 3 a verification run completed but its check failed.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace featred
