#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixmetric::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// %.17g
std::string format_real(double x);

}  // namespace mixmetric::cli
