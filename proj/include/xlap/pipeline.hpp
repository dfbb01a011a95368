#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "xlap/corpus.hpp"
#include "xlap/providers.hpp"
#include "xlap/strategies.hpp"

namespace xlap {

/// Alignment counts by method x kind x split.
class MethodStats {
 public:
  void add(AlignmentMethod method, AnnotationKind kind, Split split, std::size_t n = 1);
  std::size_t count(AlignmentMethod method, AnnotationKind kind, Split split) const;
  std::size_t count(AlignmentMethod method, AnnotationKind kind) const;
  std::size_t total(AnnotationKind kind, Split split) const;
  std::size_t total(AnnotationKind kind) const;
  std::size_t total() const;

  MethodStats &operator+=(const MethodStats &other);
  friend bool operator==(const MethodStats &, const MethodStats &) = default;

 private:
  // [method][kind][split]
  std::array<std::array<std::array<std::size_t, 4>, 2>, 8> counts_{};
};

MethodStats method_stats(std::span<const AlignedSentence> corpus);

struct AlignResult {
  std::vector<AlignedSentence> sentences;
  MethodStats stats;
  /// "doc/sent: reason" for every sentence that failed hard.
  std::vector<std::string> failures;
  /// Wall time per sentence in milliseconds, parallel to `sentences`.
  std::vector<double> elapsed_ms;
};

/// Runs the strategies of `config` in order against one annotation. The first
/// strategy that matches wins; kind-inapplicable strategies are skipped.
/// `term_translation` is the isolated translation of the annotation surface
/// (possibly empty).
AlignedAnnotation align_annotation(const std::string &s_src, const std::string &s_trans,
                                   const SourceAnnotation &annotation,
                                   const std::string &term_translation, ProviderBundle &providers,
                                   const PipelineConfig &config);

/// Translates the annotation surface, then aligns it.
AlignedAnnotation align_annotation(const std::string &s_src, const std::string &s_trans,
                                   const SourceAnnotation &annotation, ProviderBundle &providers,
                                   const PipelineConfig &config);

/// Translates (unless a translation is supplied) and aligns every annotation.
/// Hard provider failures mark the sentence failed and leave its annotations
/// Unaligned.
AlignedSentence align_sentence(const AnnotatedSentence &sentence, ProviderBundle &providers,
                               const PipelineConfig &config);

/// Reference driver: one sentence after another.
AlignResult align_corpus_serial(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                                const PipelineConfig &config);

/// OpenMP driver over sentences with `parallelism` threads. Output order and
/// content are identical to align_corpus_serial.
AlignResult align_corpus(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                         const PipelineConfig &config, int parallelism = 1);

}  // namespace xlap
