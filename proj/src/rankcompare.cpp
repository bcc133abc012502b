#include "vetrank/rankcompare.hpp"

#include <string>

#include "vetrank/error.hpp"

namespace vetrank::rankcompare {

namespace {

void check_permutation(const RankPermutation& p, const char* which) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t v : p.order) {
    if (v >= p.size() || seen[v]) {
      throw Error(ErrorKind::NotAPermutation,
                  std::string(which) + " is not a permutation of 0.." + std::to_string(p.size() - 1));
    }
    seen[v] = true;
  }
}

// Sorts seq[lo, hi) using scratch and returns the number of inversions in it.
std::uint64_t sort_count(std::vector<std::size_t>& seq, std::vector<std::size_t>& scratch,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = sort_count(seq, scratch, lo, mid) + sort_count(seq, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (seq[i] <= seq[j]) {
      scratch[k++] = seq[i++];
    } else {
      // every remaining element of the left half is greater than seq[j]
      count += mid - i;
      scratch[k++] = seq[j++];
    }
  }
  while (i < mid) scratch[k++] = seq[i++];
  while (j < hi) scratch[k++] = seq[j++];
  for (std::size_t t = lo; t < hi; ++t) seq[t] = scratch[t];
  return count;
}

}  // namespace

RankPermutation RankPermutation::from_ranking(const RankingResult& ranking) {
  const std::size_t m = ranking.ranks.size();
  RankPermutation out;
  out.order.assign(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const int r = ranking.ranks[i];
    if (r < 1 || static_cast<std::size_t>(r) > m || out.order[r - 1] != m) {
      throw Error(ErrorKind::NotAPermutation, "ranks are not a permutation of 1..m");
    }
    out.order[r - 1] = i;
  }
  return out;
}

std::uint64_t discordant_pairs(const RankPermutation& a, const RankPermutation& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch, "rankings cover different numbers of alternatives");
  }
  check_permutation(a, "first ranking");
  check_permutation(b, "second ranking");

  // Re-express a's order in b's positions; b's order becomes the identity and
  // every inversion left is a pair the two rankings disagree on.
  std::vector<std::size_t> position_in_b(b.size());
  for (std::size_t pos = 0; pos < b.size(); ++pos) position_in_b[b.order[pos]] = pos;
  std::vector<std::size_t> seq(a.size());
  for (std::size_t pos = 0; pos < a.size(); ++pos) seq[pos] = position_in_b[a.order[pos]];

  std::vector<std::size_t> scratch(seq.size());
  return sort_count(seq, scratch, 0, seq.size());
}

double kendall_tau_distance(const RankPermutation& a, const RankPermutation& b) {
  const auto discordant = discordant_pairs(a, b);
  const auto m = static_cast<std::uint64_t>(a.size());
  if (m < 2) throw Error(ErrorKind::LengthMismatch, "Kendall-tau distance needs m >= 2");
  const std::uint64_t pairs = m * (m - 1) / 2;
  return static_cast<double>(discordant) / static_cast<double>(pairs);
}

double kendall_tau_distance(const RankingResult& a, const RankingResult& b) {
  if (a.alternatives != b.alternatives) {
    throw Error(ErrorKind::LengthMismatch, "rankings are over different alternatives");
  }
  return kendall_tau_distance(RankPermutation::from_ranking(a), RankPermutation::from_ranking(b));
}

}  // namespace vetrank::rankcompare
