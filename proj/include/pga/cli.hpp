#pragma once

#include <iosfwd>

namespace pga {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

/// Entry point of the pga-lab command line; usable in-process by tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pga
