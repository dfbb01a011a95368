#include "xlap/eval.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace xlap {

namespace {

std::map<std::string, std::size_t> token_counts(std::string_view text) {
  std::map<std::string, std::size_t> counts;
  for (const auto &t : tokenize(text).tokens) ++counts[t.surface];
  return counts;
}

std::vector<std::string> folded_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto &t : tokenize(text).tokens) out.push_back(fold_case(t.surface));
  return out;
}

// [det] + tail(contracted) == other
bool decontracts_to(const std::vector<std::string> &contracted, const std::vector<std::string> &other,
                    const ErrorLexicon &lexicon) {
  if (contracted.empty()) return false;
  const Contraction *c = lexicon.find_contraction(contracted.front());
  if (!c) return false;
  std::vector<std::string> expanded = {fold_case(c->determiner)};
  expanded.insert(expanded.end(), contracted.begin() + 1, contracted.end());
  return expanded == other;
}

}  // namespace

int exact_score(const std::optional<std::string> &pred, std::string_view gold) {
  return pred && *pred == gold ? 1 : 0;
}

double relaxed_f1(const std::optional<std::string> &pred, std::string_view gold) {
  if (!pred) return 0.0;
  if (*pred == gold) return 1.0;
  const auto p = token_counts(*pred);
  const auto g = token_counts(gold);
  std::size_t p_total = 0, g_total = 0, overlap = 0;
  for (const auto &[tok, n] : p) p_total += n;
  for (const auto &[tok, n] : g) {
    g_total += n;
    if (auto it = p.find(tok); it != p.end()) overlap += std::min(n, it->second);
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(p_total);
  const double recall = static_cast<double>(overlap) / static_cast<double>(g_total);
  return 2.0 * precision * recall / (precision + recall);
}

std::string_view to_string(ErrorClass error) {
  switch (error) {
    case ErrorClass::DeterminerContraction: return "DeterminerContraction";
    case ErrorClass::NullSubject: return "NullSubject";
    case ErrorClass::Other: return "Other";
    case ErrorClass::Correct: return "Correct";
  }
  return "Other";
}

const Contraction *ErrorLexicon::find_contraction(std::string_view folded_form) const {
  for (const auto &c : contractions) {
    if (c.form == folded_form) return &c;
  }
  return nullptr;
}

const ErrorLexicon &portuguese_lexicon() {
  static const ErrorLexicon lexicon{
      {
          {"no", "em", "o"},     {"na", "em", "a"},     {"nos", "em", "os"},
          {"nas", "em", "as"},   {"do", "de", "o"},     {"da", "de", "a"},
          {"dos", "de", "os"},   {"das", "de", "as"},   {"ao", "a", "o"},
          {"aos", "a", "os"},    {"à", "a", "a"},       {"às", "a", "as"},
          {"pelo", "por", "o"},  {"pela", "por", "a"},  {"pelos", "por", "os"},
          {"pelas", "por", "as"}, {"num", "em", "um"},  {"numa", "em", "uma"},
      },
      {"nós", "eu", "ele", "ela", "eles", "elas", "tu", "vós"},
  };
  return lexicon;
}

ErrorClass classify_error(const std::optional<std::string> &pred, std::string_view gold,
                          bool absent_in_translation, const ErrorLexicon &lexicon) {
  if (exact_score(pred, gold) == 1) return ErrorClass::Correct;
  if (pred) {
    const auto p = folded_tokens(*pred);
    const auto g = folded_tokens(gold);
    if (decontracts_to(p, g, lexicon) || decontracts_to(g, p, lexicon)) {
      return ErrorClass::DeterminerContraction;
    }
    return ErrorClass::Other;
  }
  if (absent_in_translation) return ErrorClass::NullSubject;
  const auto g = folded_tokens(gold);
  if (g.size() == 1 && std::find(lexicon.subject_pronouns.begin(), lexicon.subject_pronouns.end(),
                                 g.front()) != lexicon.subject_pronouns.end()) {
    return ErrorClass::NullSubject;
  }
  return ErrorClass::Other;
}

void ScoreCell::add(double exact, double relaxed, ErrorClass error) {
  ++support;
  exact_sum += exact;
  relaxed_sum += relaxed;
  ++errors[static_cast<std::size_t>(error)];
}

ScoreCell EvalReport::method_cell(AlignmentMethod m) const {
  ScoreCell out;
  for (const ScoreCell &c : by_method_kind[static_cast<std::size_t>(m)]) {
    out.support += c.support;
    out.exact_sum += c.exact_sum;
    out.relaxed_sum += c.relaxed_sum;
    for (std::size_t e = 0; e < out.errors.size(); ++e) out.errors[e] += c.errors[e];
  }
  return out;
}

EvalReport evaluate(std::span<const AlignedSentence> aligned, std::span<const GoldAlignment> gold) {
  resolve_gold(gold, aligned);

  std::map<std::tuple<std::string, std::string, std::string>, const AlignedAnnotation *> index;
  for (const auto &s : aligned) {
    for (const auto &a : s.annotations) {
      index[{s.sentence.doc_id, s.sentence.sent_id, a.source.id}] = &a;
    }
  }

  EvalReport report;
  for (const auto &g : gold) {
    const AlignedAnnotation &a = *index.at({g.doc_id, g.sent_id, g.annotation_id});
    ScoredAnnotation s;
    s.doc_id = g.doc_id;
    s.sent_id = g.sent_id;
    s.annotation_id = g.annotation_id;
    s.kind = a.source.kind;
    s.method = a.method;
    s.predicted = a.aligned_surface;
    s.gold = g.gold_surface;
    s.exact = exact_score(s.predicted, s.gold);
    s.relaxed = relaxed_f1(s.predicted, s.gold);
    s.error = classify_error(s.predicted, s.gold);
    report.annotations.push_back(std::move(s));
  }
  // Fixed accumulation order keeps the sums independent of gold file order.
  std::sort(report.annotations.begin(), report.annotations.end(),
            [](const ScoredAnnotation &x, const ScoredAnnotation &y) {
              return std::tie(x.doc_id, x.sent_id, x.annotation_id) <
                     std::tie(y.doc_id, y.sent_id, y.annotation_id);
            });
  for (const auto &s : report.annotations) {
    const auto m = static_cast<std::size_t>(s.method);
    const auto k = static_cast<std::size_t>(s.kind);
    report.by_method_kind[m][k].add(s.exact, s.relaxed, s.error);
    report.by_kind[k].add(s.exact, s.relaxed, s.error);
    report.overall.add(s.exact, s.relaxed, s.error);
  }
  return report;
}

}  // namespace xlap
