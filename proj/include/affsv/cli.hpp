#pragma once

#include <iosfwd>

namespace affsv {

/// Exit codes: 0 pass, 1 validation or verification failure, 2 usage or
/// malformed input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace affsv
