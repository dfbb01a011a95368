#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xlap {

/// Half-open range of character (code point) offsets into a UTF-8 string.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool contains(const Span &other) const {
    return start <= other.start && other.end <= end;
  }
  bool overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span &, const Span &) = default;
};

/// Raised when a span is inverted, empty, or reaches past the end of its text.
class BoundaryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised on byte sequences that are not well-formed UTF-8.
class EncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t c);

/// Number of code points in `utf8`.
std::size_t char_length(std::string_view utf8);

/// Exact substring of `text` covered by `span`.
std::string slice(std::string_view text, Span span);
std::u32string_view slice(std::u32string_view text, Span span);

bool is_space(char32_t c);
bool is_punct(char32_t c);

/// Simple one-to-one lowercase mapping (Latin, Greek and Cyrillic blocks).
/// Code point counts are preserved, so offsets survive folding.
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view text);
std::string fold_case(std::string_view utf8);

struct Token {
  std::string surface;
  Span span;
  friend bool operator==(const Token &, const Token &) = default;
};

struct TokenizedText {
  std::string text;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::vector<std::string> surfaces() const;
  /// Character span from the start of token `first` to the end of token `last`.
  Span token_range(std::size_t first, std::size_t last) const;
};

/// Whitespace split with punctuation detached into its own tokens. Hyphens and
/// apostrophes between word characters, and '.' or ',' between digits, stay
/// inside the token. Never changes case.
TokenizedText tokenize(std::string_view text);

}  // namespace xlap
