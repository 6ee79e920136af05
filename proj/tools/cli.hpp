#pragma once

#include <ostream>

namespace orbiton {

// Exit codes: 0 pass, 2 check failure, 3 input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitInputError = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbiton
