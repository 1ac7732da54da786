#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace nbayes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime or I/O failure
inline constexpr int kExitUsage = 2;

/// Runs `nbayes <train|predict|evaluate|inspect> ...`. args excludes the
/// program name. Documents for predict are read from `in` when no text is
/// given on the command line.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nbayes::cli
