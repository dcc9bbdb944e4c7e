#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turingnet/transformer.hpp"

namespace turingnet {

/// Permutation budget per length before switching to seeded sampling (7!).
inline constexpr std::size_t kPropInvBudget = 5040;

/// Members of PropInv(w) for a tokenized word: every length L ≤ max_len at
/// which the symbol proportions of w are realizable contributes its
/// rearrangements (all of them up to the budget, a seeded sample beyond).
/// The result starts with w, holds no duplicates, and has at most `count`
/// entries when `count` > 0.
std::vector<std::vector<std::string>> propinv_samples(const std::vector<std::string>& w, std::size_t max_len,
                                                      std::size_t count, std::uint64_t seed = 0);

/// Character-level convenience form.
std::vector<std::string> propinv_samples(const std::string& w, std::size_t max_len, std::size_t count,
                                         std::uint64_t seed = 0);

/// True when u and w have the same proportion of every symbol.
bool same_proportions(const std::vector<std::string>& u, const std::vector<std::string>& w);

/// The d = 2 majority network: accepts exactly when #a > #b, with every
/// output equal to [(#a − #b)/n, 0].
Recognizer majority_recognizer();

}  // namespace turingnet
