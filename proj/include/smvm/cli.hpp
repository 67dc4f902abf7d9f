#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smvm {

namespace exit_code {
inline constexpr int kAllDone = 0;
inline constexpr int kBlocked = 2;
inline constexpr int kStepLimit = 3;
inline constexpr int kValidation = 4;
inline constexpr int kRuntime = 5;
inline constexpr int kUsage = 64;
}  // namespace exit_code

/// Entry point of the `smvm` tool. `args` excludes the program name.
///
///   run FILE [--runnables rtc|conc] [--scheduler rr|prio] [--dispatch single]
///            [--medium reliable] [--max-steps N] [--trace]
///            [--format text|structured] [--out FILE]
int cliMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smvm
