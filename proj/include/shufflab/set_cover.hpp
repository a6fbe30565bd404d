#pragma once

// Minimum set cover over small universes.

#include <cstddef>
#include <vector>

namespace shufflab {

struct CoverResult {
  std::size_t size = 0;             ///< number of sets chosen
  std::vector<std::size_t> chosen;  ///< indices into the input, ascending
  bool exact = true;                ///< false when the greedy fallback ran
};

inline constexpr std::size_t kExactCoverLimit = 20;

/// Covers elements 0..universe-1 with the fewest of `sets`. Exact branch and
/// bound when there are at most `exact_limit` sets, greedy otherwise. Throws
/// CoverError if the sets do not cover the universe.
CoverResult min_set_cover(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets,
                          std::size_t exact_limit = kExactCoverLimit);

/// Every minimum-cardinality cover, each as ascending indices, in
/// lexicographic order of the index lists. Exhaustive; meant for a handful
/// of sets.
std::vector<std::vector<std::size_t>> all_minimum_covers(
    std::size_t universe, const std::vector<std::vector<std::size_t>>& sets);

}  // namespace shufflab
