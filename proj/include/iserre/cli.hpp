#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iserre::cli {

/// Runs one command line (without the program name). Returns 0 when every
/// claim passes, 1 when one fails, 2 on a usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b" (inclusive), "a", or a comma list of those. Throws ParseError.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace iserre::cli
