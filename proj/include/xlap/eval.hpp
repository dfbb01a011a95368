#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlap/corpus.hpp"
#include "xlap/io.hpp"
#include "xlap/pipeline.hpp"

namespace xlap {

/// 1 iff `pred` is present and equal to `gold`, character for character.
int exact_score(const std::optional<std::string> &pred, std::string_view gold);

/// Token-multiset F1 between `pred` and `gold`; 0 when `pred` is absent or
/// nothing overlaps.
double relaxed_f1(const std::optional<std::string> &pred, std::string_view gold);

enum class ErrorClass { DeterminerContraction, NullSubject, Other, Correct };

inline constexpr std::array<ErrorClass, 4> kAllErrorClasses = {
    ErrorClass::DeterminerContraction, ErrorClass::NullSubject, ErrorClass::Other,
    ErrorClass::Correct};

std::string_view to_string(ErrorClass error);

struct Contraction {
  std::string form;         // "no"
  std::string preposition;  // "em"
  std::string determiner;   // "o"
};

/// Language data for the error classifier.
struct ErrorLexicon {
  std::vector<Contraction> contractions;
  std::vector<std::string> subject_pronouns;

  const Contraction *find_contraction(std::string_view folded_form) const;
};

/// Portuguese preposition + determiner contractions and subject pronouns.
const ErrorLexicon &portuguese_lexicon();

/// Correct when exact. DeterminerContraction when one side starts with a
/// contraction whose determiner followed by the rest equals the other side's
/// tokens. NullSubject when the prediction is absent and the gold is a subject
/// pronoun (or the caller flags it as absent in the translation). Else Other.
ErrorClass classify_error(const std::optional<std::string> &pred, std::string_view gold,
                          bool absent_in_translation = false,
                          const ErrorLexicon &lexicon = portuguese_lexicon());

/// Micro-averaged scores over a group of gold records.
struct ScoreCell {
  std::size_t support = 0;
  double exact_sum = 0.0;
  double relaxed_sum = 0.0;
  std::array<std::size_t, 4> errors{};  // indexed by ErrorClass

  double exact() const { return support ? exact_sum / support : 0.0; }
  double relaxed() const { return support ? relaxed_sum / support : 0.0; }
  std::size_t error_count(ErrorClass e) const { return errors[static_cast<std::size_t>(e)]; }
  void add(double exact, double relaxed, ErrorClass error);
};

struct ScoredAnnotation {
  std::string doc_id;
  std::string sent_id;
  std::string annotation_id;
  AnnotationKind kind = AnnotationKind::Trigger;
  AlignmentMethod method = AlignmentMethod::Unaligned;
  std::optional<std::string> predicted;
  std::string gold;
  int exact = 0;
  double relaxed = 0.0;
  ErrorClass error = ErrorClass::Other;
};

struct EvalReport {
  /// [method][kind]
  std::array<std::array<ScoreCell, 2>, 8> by_method_kind{};
  std::array<ScoreCell, 2> by_kind{};
  ScoreCell overall;
  /// Sorted by (doc_id, sent_id, annotation_id).
  std::vector<ScoredAnnotation> annotations;

  const ScoreCell &cell(AlignmentMethod m, AnnotationKind k) const {
    return by_method_kind[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  }
  const ScoreCell &cell(AnnotationKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  /// Both kinds for one method.
  ScoreCell method_cell(AlignmentMethod m) const;
};

/// Scores every gold record against the aligned annotation it names.
/// Throws DanglingReferenceError / LoadError like resolve_gold.
EvalReport evaluate(std::span<const AlignedSentence> aligned, std::span<const GoldAlignment> gold);

// Reports. Percentages with two decimals; "-" where there is no support.

/// Method rows (SMatch..Fuzzy, then Manual/Unaligned when present, then
/// Pipeline) by Trigger/Argument/All x Relaxed/Exact.
std::string render_eval_table(const EvalReport &report);
std::string render_eval_csv(const EvalReport &report);
/// Counts per ErrorClass, per kind and overall.
std::string render_error_breakdown(const EvalReport &report);

/// Method rows plus Total by Trigger/Argument x Train/Dev/Test/Total.
/// Unsplit columns and an Unaligned row appear only when non-zero.
std::string render_stats_table(const MethodStats &stats);
std::string render_stats_csv(const MethodStats &stats);

struct OrderScore {
  std::vector<AlignmentMethod> order;
  double exact = 0.0;
  double relaxed = 0.0;
};

struct OrderSearchResult {
  std::vector<AlignmentMethod> best;
  /// Every permutation, best first.
  std::vector<OrderScore> ranked;
};

/// Requests every provider response any strategy order could need, so later
/// runs are served from the cache. Provider errors are ignored here.
void prefetch_providers(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                        const PipelineConfig &config);

/// Tries every permutation of base.strategy_order, ranking by exact score,
/// then relaxed score, then the order's name ("SMatch,Lemma,...") ascending.
OrderSearchResult search_order(std::span<const AnnotatedSentence> corpus,
                               std::span<const GoldAlignment> gold, ProviderBundle &providers,
                               const PipelineConfig &base, int parallelism = 1);

std::string render_order_table(const OrderSearchResult &result);

}  // namespace xlap
