#include "xlap/pipeline.hpp"

#include <chrono>
#include <exception>

#include <omp.h>

namespace xlap {

void MethodStats::add(AlignmentMethod method, AnnotationKind kind, Split split, std::size_t n) {
  counts_[static_cast<std::size_t>(method)][static_cast<std::size_t>(kind)]
         [static_cast<std::size_t>(split)] += n;
}

std::size_t MethodStats::count(AlignmentMethod method, AnnotationKind kind, Split split) const {
  return counts_[static_cast<std::size_t>(method)][static_cast<std::size_t>(kind)]
                [static_cast<std::size_t>(split)];
}

std::size_t MethodStats::count(AlignmentMethod method, AnnotationKind kind) const {
  std::size_t n = 0;
  for (Split s : kAllSplits) n += count(method, kind, s);
  return n;
}

std::size_t MethodStats::total(AnnotationKind kind, Split split) const {
  std::size_t n = 0;
  for (AlignmentMethod m : kAllMethods) n += count(m, kind, split);
  return n;
}

std::size_t MethodStats::total(AnnotationKind kind) const {
  std::size_t n = 0;
  for (Split s : kAllSplits) n += total(kind, s);
  return n;
}

std::size_t MethodStats::total() const {
  return total(AnnotationKind::Trigger) + total(AnnotationKind::Argument);
}

MethodStats &MethodStats::operator+=(const MethodStats &other) {
  for (std::size_t m = 0; m < counts_.size(); ++m)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t s = 0; s < 4; ++s) counts_[m][k][s] += other.counts_[m][k][s];
  return *this;
}

MethodStats method_stats(std::span<const AlignedSentence> corpus) {
  MethodStats stats;
  for (const auto &s : corpus) {
    for (const auto &a : s.annotations) stats.add(a.method, a.source.kind, s.sentence.split);
  }
  return stats;
}

namespace {

// Errors that end the sentence rather than just the current strategy.
bool is_hard_failure(const ProviderError &e) {
  return e.kind() == ProviderErrorKind::Unavailable || e.kind() == ProviderErrorKind::RateLimited ||
         e.kind() == ProviderErrorKind::Auth;
}

std::string in_quotes(const std::string &s) { return "'" + s + "'"; }

std::string occurrences_note(const std::vector<Span> &hits) {
  if (hits.size() < 2) return "";
  return "; " + std::to_string(hits.size()) + " occurrences, leftmost taken";
}

StrategyOutcome miss(AlignmentMethod m, std::string note) {
  return StrategyOutcome{m, false, std::nullopt, std::move(note)};
}

StrategyOutcome hit(AlignmentMethod m, Span span, std::string note) {
  return StrategyOutcome{m, true, span, std::move(note)};
}

StrategyOutcome run_strategy(AlignmentMethod method, const std::string &s_src,
                             const std::string &s_trans, const TokenizedText &sentence,
                             const SourceAnnotation &annotation, const std::string &term,
                             ProviderBundle &providers, const PipelineConfig &config) {
  const bool fold = config.case_fold_direct_match;
  switch (method) {
    case AlignmentMethod::SMatch: {
      if (term.empty()) return miss(method, "no term translation");
      auto hits = find_direct_matches(term, sentence, fold);
      if (hits.empty()) return miss(method, in_quotes(term) + " not found");
      return hit(method, hits.front(), in_quotes(term) + occurrences_note(hits));
    }
    case AlignmentMethod::Lemma: {
      if (term.empty()) return miss(method, "no term translation");
      auto hits = find_lemma_matches(term, sentence, *providers.lemmatizer);
      if (hits.empty()) return miss(method, "lemmas of " + in_quotes(term) + " not found");
      return hit(method, hits.front(), "lemmas of " + in_quotes(term) + occurrences_note(hits));
    }
    case AlignmentMethod::MTrans: {
      try {
        auto m = multi_translation_match(annotation.surface, s_trans, *providers.dictionary,
                                         *providers.lemmatizer, fold);
        if (!m) return miss(method, "no alternative of " + in_quotes(annotation.surface) + " found");
        return hit(method, m->span,
                   "alternative " + in_quotes(m->alternative) + (m->via_lemma ? " via lemma" : ""));
      } catch (const ProviderError &e) {
        if (is_hard_failure(e)) throw;
        return miss(method, std::string("dictionary: ") + e.what());
      }
    }
    case AlignmentMethod::Synonym: {
      if (term.empty()) return miss(method, "no term translation");
      auto m = synonym_match(term, s_trans, *providers.thesaurus, *providers.lemmatizer, fold);
      if (!m) return miss(method, "no synonym of " + in_quotes(term) + " found");
      return hit(method, m->span,
                 "synonym " + in_quotes(m->alternative) + (m->via_lemma ? " via lemma" : ""));
    }
    case AlignmentMethod::WAligner: {
      // Any client failure is a miss for this strategy only.
      try {
        const TokenizedText src = tokenize(s_src);
        if (src.empty() || sentence.empty()) return miss(method, "empty sentence");
        const AlignmentMatrix matrix =
            providers.aligner->alignment_matrix(src.surfaces(), sentence.surfaces());
        matrix.validate();
        auto c = project_span(src, sentence, annotation.span, matrix, config);
        if (!c) return miss(method, "source span covers no token");
        const std::string desc = in_quotes(slice(s_trans, c->span)) + " (" +
                                 std::to_string(c->candidate_tokens()) + " tokens for " +
                                 std::to_string(c->source_tokens) + " source tokens)";
        if (!c->passes_safeguard) return miss(method, "candidate " + desc + " rejected by size safeguard");
        return hit(method, c->span, "candidate " + desc);
      } catch (const ProviderError &e) {
        return miss(method, std::string("aligner: ") + e.what());
      }
    }
    case AlignmentMethod::Fuzzy: {
      if (term.empty()) return miss(method, "no term translation");
      auto c = fuzzy_candidate(term, s_trans, config);
      if (!c) return miss(method, "no window of matching width");
      const std::string desc = std::string(c->by_levenshtein ? "levenshtein " : "gestalt ") +
                               std::to_string(c->score) + " for " + in_quotes(slice(s_trans, c->span));
      if (c->score < config.fuzzy_threshold) return miss(method, "best " + desc + " below threshold");
      return hit(method, c->span, desc);
    }
    case AlignmentMethod::Manual:
    case AlignmentMethod::Unaligned:
      break;
  }
  return miss(method, "not a pipeline strategy");
}

AlignedSentence failed_sentence(const AnnotatedSentence &sentence, std::optional<std::string> translation,
                                const std::string &reason) {
  AlignedSentence out;
  out.sentence = sentence;
  out.sentence.translation = std::move(translation);
  out.failure = reason;
  for (const auto &a : sentence.annotations) {
    AlignedAnnotation aligned;
    aligned.source = a;
    out.annotations.push_back(std::move(aligned));
  }
  return out;
}

}  // namespace

AlignedAnnotation align_annotation(const std::string &s_src, const std::string &s_trans,
                                   const SourceAnnotation &annotation,
                                   const std::string &term_translation, ProviderBundle &providers,
                                   const PipelineConfig &config) {
  AlignedAnnotation out;
  out.source = annotation;
  out.term_translation = term_translation;
  const TokenizedText sentence = tokenize(s_trans);
  for (AlignmentMethod method : config.strategy_order) {
    if (!applies_to(method, annotation.kind)) continue;
    StrategyOutcome outcome = run_strategy(method, s_src, s_trans, sentence, annotation,
                                           term_translation, providers, config);
    out.candidates_tried.push_back(outcome);
    if (outcome.matched) {
      out.method = method;
      out.aligned_span = outcome.span;
      out.aligned_surface = slice(s_trans, *outcome.span);
      return out;
    }
  }
  out.method = AlignmentMethod::Unaligned;
  return out;
}

AlignedAnnotation align_annotation(const std::string &s_src, const std::string &s_trans,
                                   const SourceAnnotation &annotation, ProviderBundle &providers,
                                   const PipelineConfig &config) {
  std::string term;
  std::string note;
  try {
    term = providers.translator->translate_term(annotation.surface, config.variant);
  } catch (const ProviderError &e) {
    if (is_hard_failure(e)) throw;
    note = std::string("term translation: ") + e.what();
  }
  AlignedAnnotation out = align_annotation(s_src, s_trans, annotation, term, providers, config);
  if (!note.empty() && !out.candidates_tried.empty()) {
    out.candidates_tried.front().note += " (" + note + ")";
  }
  return out;
}

AlignedSentence align_sentence(const AnnotatedSentence &sentence, ProviderBundle &providers,
                               const PipelineConfig &config) {
  std::optional<std::string> translation = sentence.translation;
  try {
    if (!translation) translation = providers.translator->translate_sentence(sentence.text, config.variant);
  } catch (const ProviderError &e) {
    return failed_sentence(sentence, std::nullopt, std::string("sentence translation: ") + e.what());
  }
  if (translation->empty()) return failed_sentence(sentence, translation, "empty sentence translation");

  AlignedSentence out;
  out.sentence = sentence;
  out.sentence.translation = translation;
  try {
    for (const auto &a : sentence.annotations) {
      out.annotations.push_back(align_annotation(sentence.text, *translation, a, providers, config));
    }
  } catch (const ProviderError &e) {
    return failed_sentence(sentence, translation, e.what());
  }
  return out;
}

namespace {

AlignResult assemble(std::vector<AlignedSentence> sentences, std::vector<double> elapsed) {
  AlignResult result;
  result.stats = method_stats(sentences);
  for (const auto &s : sentences) {
    if (s.failure) result.failures.push_back(s.sentence.doc_id + "/" + s.sentence.sent_id + ": " + *s.failure);
  }
  result.sentences = std::move(sentences);
  result.elapsed_ms = std::move(elapsed);
  return result;
}

double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

AlignResult align_corpus_serial(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                                const PipelineConfig &config) {
  config.validate();
  std::vector<AlignedSentence> out;
  std::vector<double> elapsed;
  out.reserve(corpus.size());
  for (const auto &s : corpus) {
    const auto t0 = std::chrono::steady_clock::now();
    out.push_back(align_sentence(s, providers, config));
    elapsed.push_back(millis_since(t0));
  }
  return assemble(std::move(out), std::move(elapsed));
}

AlignResult align_corpus(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                         const PipelineConfig &config, int parallelism) {
  config.validate();
  if (parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");
  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
  std::vector<AlignedSentence> out(corpus.size());
  std::vector<double> elapsed(corpus.size(), 0.0);
  std::vector<std::exception_ptr> errors(corpus.size());

#pragma omp parallel for num_threads(parallelism) schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out[i] = align_sentence(corpus[i], providers, config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
    elapsed[i] = millis_since(t0);
  }

  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return assemble(std::move(out), std::move(elapsed));
}

}  // namespace xlap
