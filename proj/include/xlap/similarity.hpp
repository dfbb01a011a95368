#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace xlap {

/// Edit distance with unit insert, delete and substitute costs, over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// 1 - distance / max(|a|, |b|); 1.0 for two empty strings.
double levenshtein_similarity(std::u32string_view a, std::u32string_view b);

struct MatchingBlock {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
  friend bool operator==(const MatchingBlock &, const MatchingBlock &) = default;
};

/// Longest common block within a[alo,ahi) x b[blo,bhi); ties go to the block
/// starting earliest in `a`, then earliest in `b`. size 0 when none.
MatchingBlock longest_common_block(std::u32string_view a, std::u32string_view b, std::size_t alo,
                                   std::size_t ahi, std::size_t blo, std::size_t bhi);

/// Ratcliff/Obershelp matching blocks in order of position (no junk heuristic).
std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b);

/// Gestalt pattern matching score 2M / (|a| + |b|); 1.0 for two empty strings.
double gestalt_similarity(std::u32string_view a, std::u32string_view b);

}  // namespace xlap
