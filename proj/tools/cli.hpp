#pragma once

#include <ostream>

namespace iqcc::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Entry point of the iqcc command. Reports go to out (or to -o files),
/// diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iqcc::cli
