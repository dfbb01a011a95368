#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlap/text.hpp"

namespace xlap {

enum class AnnotationKind { Trigger, Argument };

enum class AlignmentMethod { SMatch, Lemma, MTrans, Synonym, WAligner, Fuzzy, Manual, Unaligned };

enum class Split { Train, Dev, Test, Unsplit };

inline constexpr std::array<AlignmentMethod, 8> kAllMethods = {
    AlignmentMethod::SMatch,   AlignmentMethod::Lemma, AlignmentMethod::MTrans,
    AlignmentMethod::Synonym,  AlignmentMethod::WAligner, AlignmentMethod::Fuzzy,
    AlignmentMethod::Manual,   AlignmentMethod::Unaligned};

/// The six methods the pipeline can run, in their default order.
inline constexpr std::array<AlignmentMethod, 6> kStrategyMethods = {
    AlignmentMethod::SMatch,  AlignmentMethod::Lemma,    AlignmentMethod::MTrans,
    AlignmentMethod::Synonym, AlignmentMethod::WAligner, AlignmentMethod::Fuzzy};

inline constexpr std::array<Split, 4> kAllSplits = {Split::Train, Split::Dev, Split::Test,
                                                    Split::Unsplit};

std::string_view to_string(AnnotationKind kind);
std::string_view to_string(AlignmentMethod method);
std::string_view to_string(Split split);

// Parsers accept the names produced by to_string (kinds and splits are
// lowercase, methods are case-sensitive) and throw std::invalid_argument.
AnnotationKind parse_kind(std::string_view name);
AlignmentMethod parse_method(std::string_view name);
Split parse_split(std::string_view name);

/// Whether the pipeline may run `method` for an annotation of `kind`.
bool applies_to(AlignmentMethod method, AnnotationKind kind);

struct SourceAnnotation {
  std::string id;
  AnnotationKind kind = AnnotationKind::Trigger;
  std::string label;
  Span span;
  std::string surface;
  friend bool operator==(const SourceAnnotation &, const SourceAnnotation &) = default;
};

struct AnnotatedSentence {
  std::string doc_id;
  std::string sent_id;
  Split split = Split::Unsplit;
  std::string text;
  std::vector<SourceAnnotation> annotations;
  std::optional<std::string> translation;
  friend bool operator==(const AnnotatedSentence &, const AnnotatedSentence &) = default;
};

/// One strategy attempt in an annotation's audit trail.
struct StrategyOutcome {
  AlignmentMethod method = AlignmentMethod::SMatch;
  bool matched = false;
  std::optional<Span> span;
  std::string note;
  friend bool operator==(const StrategyOutcome &, const StrategyOutcome &) = default;
};

struct AlignedAnnotation {
  SourceAnnotation source;
  std::string term_translation;
  std::optional<Span> aligned_span;
  std::optional<std::string> aligned_surface;
  AlignmentMethod method = AlignmentMethod::Unaligned;
  std::vector<StrategyOutcome> candidates_tried;
  friend bool operator==(const AlignedAnnotation &, const AlignedAnnotation &) = default;
};

struct AlignedSentence {
  AnnotatedSentence sentence;
  std::vector<AlignedAnnotation> annotations;
  /// Set when a provider failed hard for this sentence.
  std::optional<std::string> failure;
  friend bool operator==(const AlignedSentence &, const AlignedSentence &) = default;
};

/// Checks every sentence-level invariant. Each entry names the offending
/// annotation id (or the sentence) and what is wrong.
std::vector<std::string> validate_sentence(const AnnotatedSentence &sentence);

/// Same for aligned output: span/method agreement, surfaces, kind gating.
std::vector<std::string> validate_aligned(const AlignedSentence &sentence);

}  // namespace xlap
