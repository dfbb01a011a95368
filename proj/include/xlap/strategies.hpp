#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlap/corpus.hpp"
#include "xlap/providers.hpp"
#include "xlap/text.hpp"

namespace xlap {

struct PipelineConfig {
  std::vector<AlignmentMethod> strategy_order = {kStrategyMethods.begin(), kStrategyMethods.end()};
  double fuzzy_threshold = 0.75;
  std::size_t safeguard_slack_tokens = 3;
  double safeguard_ratio = 2.0;
  double aligner_prob_threshold = 0.1;
  bool case_fold_direct_match = true;
  Variant variant = Variant::European;

  /// Throws std::invalid_argument on duplicates, a missing SMatch, methods that
  /// are not strategies, or out-of-range thresholds.
  void validate() const;
};

/// Parses "SMatch,Lemma,..." (whitespace around names is ignored).
std::vector<AlignmentMethod> parse_order(std::string_view text);
std::string format_order(const std::vector<AlignmentMethod> &order);

// --- direct match -----------------------------------------------------------

/// Every occurrence of `needle` in `haystack` that starts at a token start and
/// ends at a token end, left to right. Overlapping occurrences are all listed.
std::vector<Span> find_direct_matches(std::string_view needle, const TokenizedText &haystack,
                                      bool case_fold);

/// Leftmost token-aligned occurrence of `a_trans` in `s_trans`.
std::optional<Span> direct_match(std::string_view a_trans, std::string_view s_trans, bool case_fold);

// --- lemma match --------------------------------------------------------------

/// Character spans of every occurrence of the lemma sequence of `a_trans` as
/// a contiguous run of `s_trans` lemmas, left to right.
std::vector<Span> find_lemma_matches(std::string_view a_trans, const TokenizedText &s_trans,
                                     const Lemmatizer &lemmatizer,
                                     std::string_view language = kTargetLanguage);

std::optional<Span> lemma_match(std::string_view a_trans, std::string_view s_trans,
                                const Lemmatizer &lemmatizer,
                                std::string_view language = kTargetLanguage);

// --- alternatives (multiple translations, synonyms) -------------------------

struct AlternativeMatch {
  Span span;
  std::string alternative;
  bool via_lemma = false;
  friend bool operator==(const AlternativeMatch &, const AlternativeMatch &) = default;
};

/// Direct match of each dictionary alternative of `a_src` in provider order;
/// if none hits, a second pass lemma-matches each alternative.
std::optional<AlternativeMatch> multi_translation_match(const std::string &a_src,
                                                        std::string_view s_trans,
                                                        DictionaryLookup &dictionary,
                                                        const Lemmatizer &lemmatizer, bool case_fold);

/// Same search over the thesaurus synonyms of `t_trans`, but each synonym is
/// tried directly and then by lemma before moving to the next one.
std::optional<AlternativeMatch> synonym_match(const std::string &t_trans, std::string_view s_trans,
                                              const Thesaurus &thesaurus,
                                              const Lemmatizer &lemmatizer, bool case_fold);

// --- word aligner -------------------------------------------------------------

/// Passes iff candidate_tokens <= max(ratio * source_tokens, source_tokens + slack).
bool size_safeguard(std::size_t candidate_tokens, std::size_t source_tokens,
                    const PipelineConfig &config);

struct AlignerCandidate {
  std::size_t first_token = 0;  // in the target sentence
  std::size_t last_token = 0;
  std::size_t source_tokens = 0;
  Span span;
  bool passes_safeguard = false;

  std::size_t candidate_tokens() const { return last_token - first_token + 1; }
};

/// Projects the source tokens under `a_src_span` through `matrix`. For each
/// source token the target tokens above the probability threshold are selected
/// (its row argmax when none are); the candidate covers the lowest through the
/// highest selected target token. nullopt when the span covers no token.
std::optional<AlignerCandidate> project_span(const TokenizedText &s_src,
                                             const TokenizedText &s_trans, Span a_src_span,
                                             const AlignmentMatrix &matrix,
                                             const PipelineConfig &config);

/// Requests the alignment matrix for the two tokenized sentences and returns
/// the projected span if it passes the size safeguard. Client errors propagate.
std::optional<Span> word_aligner_match(std::string_view s_src, std::string_view s_trans,
                                       Span a_src_span, EmbedAlignerClient &aligner,
                                       const PipelineConfig &config);

// --- fuzzy ------------------------------------------------------------------------

struct FuzzyCandidate {
  Span span;
  double score = 0.0;
  bool by_levenshtein = false;
};

/// Best window of the same token width as `a_trans`, scored by Gestalt
/// similarity and, if that stays below the threshold, by normalized
/// Levenshtein similarity. Leftmost window wins ties. Comparison is
/// case-insensitive.
std::optional<FuzzyCandidate> fuzzy_candidate(std::string_view a_trans, std::string_view s_trans,
                                              const PipelineConfig &config);

std::optional<Span> fuzzy_match(std::string_view a_trans, std::string_view s_trans,
                                const PipelineConfig &config);

}  // namespace xlap
