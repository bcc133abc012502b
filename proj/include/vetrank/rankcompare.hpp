#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vetrank/model.hpp"

namespace vetrank::rankcompare {

/// Alternative indices (0-based) listed best first.
struct RankPermutation {
  std::vector<std::size_t> order;

  /// Order implied by a ranking result: index with rank 1 first.
  static RankPermutation from_ranking(const RankingResult& ranking);

  std::size_t size() const noexcept { return order.size(); }
};

/// Number of alternative pairs placed in opposite order by `a` and `b`.
/// O(m log m) via merge-sort inversion counting.
std::uint64_t discordant_pairs(const RankPermutation& a, const RankPermutation& b);

/// Relative Kendall-tau distance: discordant pairs / C(m, 2), in [0, 1].
/// Throws LengthMismatch or NotAPermutation; requires m >= 2.
double kendall_tau_distance(const RankPermutation& a, const RankPermutation& b);

double kendall_tau_distance(const RankingResult& a, const RankingResult& b);

}  // namespace vetrank::rankcompare
