#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evograph::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kInvalidArguments = 2;
inline constexpr int kInvalidRegime = 3;

// Runs one command line (args excludes the program name). Reports go to `out`
// unless --out is given; errors are one JSON object per line on `err`, and
// sweep progress goes to `err` too.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// start:stop:step (inclusive, step > 0) or a comma list. Throws
// std::invalid_argument on malformed or empty grids.
std::vector<double> parse_real_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);
std::vector<std::string> parse_word_list(const std::string& text);

}  // namespace evograph::cli
