#include "xlap/corpus.hpp"

#include <map>
#include <stdexcept>

namespace xlap {

std::string_view to_string(AnnotationKind kind) {
  return kind == AnnotationKind::Trigger ? "trigger" : "argument";
}

std::string_view to_string(AlignmentMethod method) {
  switch (method) {
    case AlignmentMethod::SMatch: return "SMatch";
    case AlignmentMethod::Lemma: return "Lemma";
    case AlignmentMethod::MTrans: return "MTrans";
    case AlignmentMethod::Synonym: return "Synonym";
    case AlignmentMethod::WAligner: return "WAligner";
    case AlignmentMethod::Fuzzy: return "Fuzzy";
    case AlignmentMethod::Manual: return "Manual";
    case AlignmentMethod::Unaligned: return "Unaligned";
  }
  return "Unaligned";
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Unsplit: return "unsplit";
  }
  return "unsplit";
}

AnnotationKind parse_kind(std::string_view name) {
  if (name == "trigger") return AnnotationKind::Trigger;
  if (name == "argument") return AnnotationKind::Argument;
  throw std::invalid_argument("unknown annotation kind '" + std::string(name) + "'");
}

AlignmentMethod parse_method(std::string_view name) {
  for (AlignmentMethod m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown alignment method '" + std::string(name) + "'");
}

Split parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

bool applies_to(AlignmentMethod method, AnnotationKind kind) {
  if (method == AlignmentMethod::Synonym) return kind == AnnotationKind::Trigger;
  if (method == AlignmentMethod::Fuzzy) return kind == AnnotationKind::Argument;
  return true;
}

namespace {

std::string sentence_ref(const AnnotatedSentence &s) { return s.doc_id + "/" + s.sent_id; }

// Returns the slice or nullopt when the span is not valid for `text`.
std::optional<std::string> try_slice(std::string_view text, Span span) {
  try {
    return slice(text, span);
  } catch (const BoundaryError &) {
    return std::nullopt;
  } catch (const EncodingError &) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::string> validate_sentence(const AnnotatedSentence &s) {
  std::vector<std::string> out;
  const std::string ref = sentence_ref(s);
  std::size_t text_len = 0;
  try {
    text_len = char_length(s.text);
  } catch (const EncodingError &e) {
    out.push_back(ref + ": text is not valid UTF-8: " + e.what());
    return out;
  }

  std::map<std::string, int> seen;
  for (const auto &a : s.annotations) {
    const std::string who = ref + " annotation '" + a.id + "'";
    if (++seen[a.id] >= 2) out.push_back(who + ": duplicate annotation id");
    if (a.label.empty()) out.push_back(who + ": empty label");
    if (a.span.start >= a.span.end) {
      out.push_back(who + ": span (" + std::to_string(a.span.start) + "," +
                    std::to_string(a.span.end) + ") is empty or inverted");
      continue;
    }
    if (a.span.end > text_len) {
      out.push_back(who + ": span end " + std::to_string(a.span.end) +
                    " past end of text (length " + std::to_string(text_len) + ")");
      continue;
    }
    const auto at_span = try_slice(s.text, a.span);
    if (!at_span || *at_span != a.surface) {
      out.push_back(who + ": surface '" + a.surface + "' does not match text at span ('" +
                    at_span.value_or("") + "')");
    }
  }
  return out;
}

std::vector<std::string> validate_aligned(const AlignedSentence &s) {
  std::vector<std::string> out = validate_sentence(s.sentence);
  const std::string ref = sentence_ref(s.sentence);
  if (s.annotations.size() != s.sentence.annotations.size()) {
    out.push_back(ref + ": " + std::to_string(s.annotations.size()) +
                  " aligned annotations for " + std::to_string(s.sentence.annotations.size()) +
                  " source annotations");
  }
  const std::string translation = s.sentence.translation.value_or("");
  for (const auto &a : s.annotations) {
    const std::string who = ref + " annotation '" + a.source.id + "'";
    const bool aligned = a.method != AlignmentMethod::Unaligned;
    if (aligned != a.aligned_span.has_value()) {
      out.push_back(who + ": method " + std::string(to_string(a.method)) +
                    (aligned ? " without" : " with") + " an aligned span");
      continue;
    }
    if (a.aligned_span.has_value() != a.aligned_surface.has_value()) {
      out.push_back(who + ": aligned span and aligned surface must be both present or absent");
      continue;
    }
    if (!applies_to(a.method, a.source.kind)) {
      out.push_back(who + ": method " + std::string(to_string(a.method)) + " cannot align a " +
                    std::string(to_string(a.source.kind)));
    }
    if (a.aligned_span) {
      const auto at_span = try_slice(translation, *a.aligned_span);
      if (!at_span || *at_span != *a.aligned_surface) {
        out.push_back(who + ": aligned surface '" + *a.aligned_surface +
                      "' does not match translation at span ('" + at_span.value_or("") + "')");
      }
    }
  }
  return out;
}

}  // namespace xlap
