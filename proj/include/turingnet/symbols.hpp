#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace turingnet {

/// Splits `w` into alphabet symbols, preferring the longest match.
std::vector<std::string> tokenize(const std::vector<std::string>& alphabet, std::string_view w);

}  // namespace turingnet
