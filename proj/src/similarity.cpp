#include "xlap/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace xlap {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Two rows over the shorter string.
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double levenshtein_similarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

MatchingBlock longest_common_block(std::u32string_view a, std::u32string_view b, std::size_t alo,
                                   std::size_t ahi, std::size_t blo, std::size_t bhi) {
  MatchingBlock best{alo, blo, 0};
  // run[j + 1] = length of the common suffix ending at a[i], b[j].
  std::vector<std::size_t> run(bhi - blo + 1, 0);
  std::vector<std::size_t> next(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      if (a[i] == b[j]) {
        const std::size_t k = run[col - 1] + 1;
        next[col] = k;
        if (k > best.size) best = MatchingBlock{i + 1 - k, j + 1 - k, k};
      } else {
        next[col] = 0;
      }
    }
    std::swap(run, next);
  }
  return best;
}

std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b) {
  std::vector<MatchingBlock> blocks;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> pending = {
      {0, a.size(), 0, b.size()}};
  while (!pending.empty()) {
    auto [alo, ahi, blo, bhi] = pending.back();
    pending.pop_back();
    const MatchingBlock m = longest_common_block(a, b, alo, ahi, blo, bhi);
    if (m.size == 0) continue;
    blocks.push_back(m);
    if (alo < m.a && blo < m.b) pending.emplace_back(alo, m.a, blo, m.b);
    if (m.a + m.size < ahi && m.b + m.size < bhi) {
      pending.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const MatchingBlock &x, const MatchingBlock &y) { return x.a < y.a; });
  return blocks;
}

double gestalt_similarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  std::size_t matched = 0;
  for (const auto &m : matching_blocks(a, b)) matched += m.size;
  return 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

}  // namespace xlap
