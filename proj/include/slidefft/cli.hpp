#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

namespace slidefft::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kInfeasible = 3,
};

// "7", "1..500" or "1-500" (inclusive).
std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text);

// "8,16,32"
std::vector<std::size_t> parse_list(std::string_view text);

// Entry point shared by the slidefft executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slidefft::cli
