#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lsa {

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// Number of subsets of size 1..k of an n-set, saturating.
std::uint64_t subsets_up_to(int n, int k);

/// Visits every k-subset of {0..n-1} in lexicographic order. The visitor
/// returns false to stop early. Returns the number of subsets visited.
template <class Visitor>
std::uint64_t for_each_combination(int n, int k, Visitor&& visit) {
  if (k < 0 || k > n) return 0;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  std::uint64_t count = 0;
  while (true) {
    ++count;
    if (!visit(std::span<const int>(c))) return count;
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return count;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace lsa
