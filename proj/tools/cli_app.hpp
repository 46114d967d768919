#pragma once

#include <iosfwd>

namespace isoflow::cli {

// Exit codes: 0 all checks pass, 1 a check failed or a numerical failure
// occurred, 2 bad arguments or schema violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isoflow::cli
