#include "xlap/text.hpp"

#include <string>

namespace xlap {

namespace {

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Decodes one code point starting at `i`, advancing `i`.
char32_t decode_one(std::string_view s, std::size_t &i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++i;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    throw EncodingError("invalid UTF-8 lead byte at offset " + std::to_string(i));
  }
  if (i + extra >= s.size()) {
    throw EncodingError("truncated UTF-8 sequence at offset " + std::to_string(i));
  }
  for (std::size_t k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if (!is_continuation(b)) {
      throw EncodingError("invalid UTF-8 continuation at offset " + std::to_string(i + k));
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw EncodingError("invalid UTF-8 code point at offset " + std::to_string(i));
  }
  i += extra + 1;
  return cp;
}

void append_utf8(std::string &out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool is_word_char(char32_t c) { return !is_space(c) && !is_punct(c); }

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// Punctuation that stays attached when it sits between two word characters.
bool is_inner_joiner(char32_t c, char32_t prev, char32_t next) {
  if (!is_word_char(prev) || !is_word_char(next)) return false;
  switch (c) {
    case U'-':
    case U'\'':
    case 0x2019:  // right single quotation mark
    case 0x2010:  // hyphen
    case 0x2011:  // non-breaking hyphen
      return true;
    case U'.':
    case U',':
      return is_digit(prev) && is_digit(next);
    default:
      return false;
  }
}

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) out.push_back(decode_one(utf8, i));
  return out;
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append_utf8(out, c);
  return out;
}

std::string to_utf8(char32_t c) {
  std::string out;
  append_utf8(out, c);
  return out;
}

std::size_t char_length(std::string_view utf8) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    decode_one(utf8, i);
    ++n;
  }
  return n;
}

std::u32string_view slice(std::u32string_view text, Span span) {
  if (span.start >= span.end) {
    throw BoundaryError("inverted or empty span (" + std::to_string(span.start) + "," +
                        std::to_string(span.end) + ")");
  }
  if (span.end > text.size()) {
    throw BoundaryError("span (" + std::to_string(span.start) + "," + std::to_string(span.end) +
                        ") past end of text of length " + std::to_string(text.size()));
  }
  return text.substr(span.start, span.length());
}

std::string slice(std::string_view text, Span span) {
  if (span.start >= span.end) {
    throw BoundaryError("inverted or empty span (" + std::to_string(span.start) + "," +
                        std::to_string(span.end) + ")");
  }
  std::size_t i = 0;
  std::size_t index = 0;
  std::size_t byte_start = std::string_view::npos;
  while (i < text.size() && index < span.end) {
    if (index == span.start) byte_start = i;
    decode_one(text, i);
    ++index;
  }
  if (index < span.end || byte_start == std::string_view::npos) {
    throw BoundaryError("span (" + std::to_string(span.start) + "," + std::to_string(span.end) +
                        ") past end of text of length " + std::to_string(index));
  }
  return std::string(text.substr(byte_start, i - byte_start));
}

bool is_space(char32_t c) {
  switch (c) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1:  // inverted exclamation
    case 0xA7:  // section sign
    case 0xAB:  // left guillemet
    case 0xB6:  // pilcrow
    case 0xB7:  // middle dot
    case 0xBB:  // right guillemet
    case 0xBF:  // inverted question mark
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F);
}

char32_t fold_case(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c < 0xC0) return c;
  // Latin-1 supplement, skipping the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  // Latin Extended-A pairs (even upper, odd lower), except the dotted/dotless i
  // and the odd-aligned ranges 0x139-0x148 and 0x179-0x17E.
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return U'i';
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) {
      return (c % 2 == 1) ? c + 1 : c;
    }
    if (c == 0x178) return 0xFF;
    if (c == 0x131 || c == 0x138 || c == 0x149 || c == 0x17F) return c;
    return (c % 2 == 0) ? c + 1 : c;
  }
  // Greek capitals.
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 0x3F;
  // Cyrillic.
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

std::u32string fold_case(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t &c : out) c = fold_case(c);
  return out;
}

std::string fold_case(std::string_view utf8) { return to_utf8(fold_case(to_u32(utf8))); }

std::vector<std::string> TokenizedText::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(t.surface);
  return out;
}

Span TokenizedText::token_range(std::size_t first, std::size_t last) const {
  if (first > last || last >= tokens.size()) {
    throw BoundaryError("token range [" + std::to_string(first) + "," + std::to_string(last) +
                        "] outside " + std::to_string(tokens.size()) + " tokens");
  }
  return Span{tokens[first].span.start, tokens[last].span.end};
}

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.text = std::string(text);
  const std::u32string cps = to_u32(text);
  const std::size_t n = cps.size();

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (!is_punct(c)) {
      while (j < n) {
        const char32_t d = cps[j];
        if (is_space(d)) break;
        if (is_punct(d) && !(j + 1 < n && is_inner_joiner(d, cps[j - 1], cps[j + 1]))) break;
        ++j;
      }
    }
    Span span{i, j};
    out.tokens.push_back(Token{to_utf8(cps.substr(i, j - i)), span});
    i = j;
  }
  return out;
}

}  // namespace xlap
