#pragma once

#include <iosfwd>

namespace alab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalidModel = 2;

/// Entry point of algebroid-lab. Exit status reports whether the tool ran,
/// never whether a property holds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alab::cli
