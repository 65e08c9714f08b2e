#pragma once

#include <ostream>
#include <span>
#include <string>

namespace uagan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitNumeric = 3;

// Runs one subcommand: train | finetune | sample | grid | scatter | phases |
// compare | gradcheck. `args` excludes the program name.
int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace uagan
