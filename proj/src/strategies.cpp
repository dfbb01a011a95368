#include "xlap/strategies.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "xlap/similarity.hpp"

namespace xlap {

void PipelineConfig::validate() const {
  std::set<AlignmentMethod> seen;
  bool has_smatch = false;
  for (AlignmentMethod m : strategy_order) {
    if (std::find(kStrategyMethods.begin(), kStrategyMethods.end(), m) == kStrategyMethods.end()) {
      throw std::invalid_argument(std::string(to_string(m)) + " is not a pipeline strategy");
    }
    if (!seen.insert(m).second) {
      throw std::invalid_argument("strategy " + std::string(to_string(m)) + " listed twice");
    }
    has_smatch = has_smatch || m == AlignmentMethod::SMatch;
  }
  if (!has_smatch) throw std::invalid_argument("strategy order must include SMatch");
  if (!(fuzzy_threshold >= 0.0 && fuzzy_threshold <= 1.0)) {
    throw std::invalid_argument("fuzzy threshold must lie in [0,1]");
  }
  if (!(aligner_prob_threshold >= 0.0 && aligner_prob_threshold <= 1.0)) {
    throw std::invalid_argument("aligner probability threshold must lie in [0,1]");
  }
  if (!(safeguard_ratio > 1.0)) throw std::invalid_argument("safeguard ratio must be greater than 1");
}

std::vector<AlignmentMethod> parse_order(std::string_view text) {
  std::vector<AlignmentMethod> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view name = text.substr(start, comma - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (!name.empty()) out.push_back(parse_method(name));
    start = comma + 1;
  }
  return out;
}

std::string format_order(const std::vector<AlignmentMethod> &order) {
  std::string out;
  for (AlignmentMethod m : order) {
    if (!out.empty()) out += ',';
    out += to_string(m);
  }
  return out;
}

namespace {

std::u32string_view trim(std::u32string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> lemmas_of(const TokenizedText &text, const Lemmatizer &lemmatizer,
                                   std::string_view language) {
  return lemmatizer.lemmatize(text.surfaces(), language);
}

}  // namespace

std::vector<Span> find_direct_matches(std::string_view needle, const TokenizedText &haystack,
                                      bool case_fold) {
  std::u32string n32 = to_u32(needle);
  std::u32string h32 = to_u32(haystack.text);
  if (case_fold) {
    n32 = fold_case(n32);
    h32 = fold_case(h32);
  }
  const std::u32string_view n = trim(n32);
  std::vector<Span> out;
  if (n.empty() || n.size() > h32.size()) return out;

  std::vector<bool> starts(h32.size() + 1, false);
  std::vector<bool> ends(h32.size() + 1, false);
  for (const auto &t : haystack.tokens) {
    starts[t.span.start] = true;
    ends[t.span.end] = true;
  }
  const std::u32string_view h = h32;
  for (std::size_t pos = 0; pos + n.size() <= h.size(); ++pos) {
    if (!starts[pos] || !ends[pos + n.size()]) continue;
    if (h.compare(pos, n.size(), n) == 0) out.push_back(Span{pos, pos + n.size()});
  }
  return out;
}

std::optional<Span> direct_match(std::string_view a_trans, std::string_view s_trans, bool case_fold) {
  auto matches = find_direct_matches(a_trans, tokenize(s_trans), case_fold);
  if (matches.empty()) return std::nullopt;
  return matches.front();
}

std::vector<Span> find_lemma_matches(std::string_view a_trans, const TokenizedText &s_trans,
                                     const Lemmatizer &lemmatizer, std::string_view language) {
  const TokenizedText needle = tokenize(a_trans);
  std::vector<Span> out;
  if (needle.empty() || needle.size() > s_trans.size()) return out;
  const auto needle_lemmas = lemmas_of(needle, lemmatizer, language);
  const auto sentence_lemmas = lemmas_of(s_trans, lemmatizer, language);
  const std::size_t k = needle_lemmas.size();
  for (std::size_t i = 0; i + k <= sentence_lemmas.size(); ++i) {
    if (std::equal(needle_lemmas.begin(), needle_lemmas.end(), sentence_lemmas.begin() + i)) {
      out.push_back(s_trans.token_range(i, i + k - 1));
    }
  }
  return out;
}

std::optional<Span> lemma_match(std::string_view a_trans, std::string_view s_trans,
                                const Lemmatizer &lemmatizer, std::string_view language) {
  auto matches = find_lemma_matches(a_trans, tokenize(s_trans), lemmatizer, language);
  if (matches.empty()) return std::nullopt;
  return matches.front();
}

std::optional<AlternativeMatch> multi_translation_match(const std::string &a_src,
                                                        std::string_view s_trans,
                                                        DictionaryLookup &dictionary,
                                                        const Lemmatizer &lemmatizer, bool case_fold) {
  const auto alternatives = dictionary.lookup_alternatives(a_src);
  if (alternatives.empty()) return std::nullopt;
  const TokenizedText sentence = tokenize(s_trans);
  for (const auto &alt : alternatives) {
    auto hits = find_direct_matches(alt, sentence, case_fold);
    if (!hits.empty()) return AlternativeMatch{hits.front(), alt, false};
  }
  for (const auto &alt : alternatives) {
    auto hits = find_lemma_matches(alt, sentence, lemmatizer);
    if (!hits.empty()) return AlternativeMatch{hits.front(), alt, true};
  }
  return std::nullopt;
}

std::optional<AlternativeMatch> synonym_match(const std::string &t_trans, std::string_view s_trans,
                                              const Thesaurus &thesaurus,
                                              const Lemmatizer &lemmatizer, bool case_fold) {
  if (t_trans.empty()) return std::nullopt;
  const auto synonyms = thesaurus.synonyms(t_trans, kTargetLanguage);
  if (synonyms.empty()) return std::nullopt;
  const TokenizedText sentence = tokenize(s_trans);
  for (const auto &syn : synonyms) {
    if (auto hits = find_direct_matches(syn, sentence, case_fold); !hits.empty()) {
      return AlternativeMatch{hits.front(), syn, false};
    }
    if (auto hits = find_lemma_matches(syn, sentence, lemmatizer); !hits.empty()) {
      return AlternativeMatch{hits.front(), syn, true};
    }
  }
  return std::nullopt;
}

bool size_safeguard(std::size_t candidate_tokens, std::size_t source_tokens,
                    const PipelineConfig &config) {
  const double by_ratio = config.safeguard_ratio * static_cast<double>(source_tokens);
  const double by_slack = static_cast<double>(source_tokens + config.safeguard_slack_tokens);
  return static_cast<double>(candidate_tokens) <= std::max(by_ratio, by_slack);
}

std::optional<AlignerCandidate> project_span(const TokenizedText &s_src,
                                             const TokenizedText &s_trans, Span a_src_span,
                                             const AlignmentMatrix &matrix,
                                             const PipelineConfig &config) {
  if (matrix.rows() != s_src.size() || matrix.cols() != s_trans.size()) {
    throw ProviderError(ProviderErrorKind::Protocol,
                        "alignment matrix is " + std::to_string(matrix.rows()) + "x" +
                            std::to_string(matrix.cols()) + " for " + std::to_string(s_src.size()) +
                            " source and " + std::to_string(s_trans.size()) + " target tokens");
  }
  AlignerCandidate c;
  c.first_token = matrix.cols();
  for (std::size_t i = 0; i < s_src.size(); ++i) {
    if (!s_src.tokens[i].span.overlaps(a_src_span)) continue;
    ++c.source_tokens;
    bool any = false;
    std::size_t argmax = 0;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      const double p = matrix.at(i, j);
      if (p > matrix.at(i, argmax)) argmax = j;
      if (p > config.aligner_prob_threshold) {
        any = true;
        c.first_token = std::min(c.first_token, j);
        c.last_token = std::max(c.last_token, j);
      }
    }
    if (!any) {
      c.first_token = std::min(c.first_token, argmax);
      c.last_token = std::max(c.last_token, argmax);
    }
  }
  if (c.source_tokens == 0) return std::nullopt;
  c.span = s_trans.token_range(c.first_token, c.last_token);
  c.passes_safeguard = size_safeguard(c.candidate_tokens(), c.source_tokens, config);
  return c;
}

std::optional<Span> word_aligner_match(std::string_view s_src, std::string_view s_trans,
                                       Span a_src_span, EmbedAlignerClient &aligner,
                                       const PipelineConfig &config) {
  const TokenizedText src = tokenize(s_src);
  const TokenizedText tgt = tokenize(s_trans);
  if (src.empty() || tgt.empty()) return std::nullopt;
  const AlignmentMatrix matrix = aligner.alignment_matrix(src.surfaces(), tgt.surfaces());
  matrix.validate();
  auto candidate = project_span(src, tgt, a_src_span, matrix, config);
  if (!candidate || !candidate->passes_safeguard) return std::nullopt;
  return candidate->span;
}

std::optional<FuzzyCandidate> fuzzy_candidate(std::string_view a_trans, std::string_view s_trans,
                                              const PipelineConfig &config) {
  const TokenizedText needle = tokenize(a_trans);
  const TokenizedText sentence = tokenize(s_trans);
  const std::size_t width = needle.size();
  if (width == 0 || width > sentence.size()) return std::nullopt;

  const std::u32string target = fold_case(trim(to_u32(a_trans)));
  const std::u32string text = fold_case(to_u32(sentence.text));
  std::vector<Span> windows;
  for (std::size_t i = 0; i + width <= sentence.size(); ++i) {
    windows.push_back(sentence.token_range(i, i + width - 1));
  }

  auto best_by = [&](auto &&score) {
    FuzzyCandidate best{windows.front(), -1.0, false};
    for (const Span &w : windows) {
      const double s = score(std::u32string_view(text).substr(w.start, w.length()), target);
      if (s > best.score) best = FuzzyCandidate{w, s, false};
    }
    return best;
  };

  FuzzyCandidate best = best_by(gestalt_similarity);
  if (best.score >= config.fuzzy_threshold) return best;
  best = best_by(levenshtein_similarity);
  best.by_levenshtein = true;
  return best;
}

std::optional<Span> fuzzy_match(std::string_view a_trans, std::string_view s_trans,
                                const PipelineConfig &config) {
  auto c = fuzzy_candidate(a_trans, s_trans, config);
  if (!c || c->score < config.fuzzy_threshold) return std::nullopt;
  return c->span;
}

}  // namespace xlap
