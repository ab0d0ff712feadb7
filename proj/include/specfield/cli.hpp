#pragma once

#include <ostream>
#include <span>
#include <string>

namespace specfield::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitUsage = 64;

/// Dispatches a subcommand. args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace specfield::cli
