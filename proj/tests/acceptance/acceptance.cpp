// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <unistd.h>

#include "xlap/eval.hpp"
#include "xlap/fixture_providers.hpp"
#include "xlap/io.hpp"
#include "xlap/pipeline.hpp"
#include "xlap/similarity.hpp"
#include "xlap/strategies.hpp"

using namespace xlap;

namespace {

// Tolerances and sizes.
constexpr double kLevenshteinBudgetSeconds = 60.0;
constexpr std::size_t kLevenshteinMaxLength = 6;
constexpr int kMetricPairs = 1000;
constexpr double kRelaxedExample = 0.6667;
constexpr double kRelaxedTolerance = 1e-4;
constexpr int kAlignerMatrices = 10;
constexpr int kSafeguardProperty = 10000;
constexpr std::size_t kFixtureAnnotations = 30;

const std::filesystem::path kFixtures = XLAP_FIXTURES_DIR;

int failures = 0;

void report(const std::string &name, bool ok, const std::string &detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void check(const std::string &name, const std::function<std::pair<bool, std::string>()> &body) {
  try {
    const auto [ok, detail] = body();
    report(name, ok, detail);
  } catch (const std::exception &e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

std::string read_bytes(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Plain recursive definition, no table.
std::size_t lev_recursive(std::u32string_view a, std::u32string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  if (a[0] == b[0]) return lev_recursive(a.substr(1), b.substr(1));
  return 1 + std::min({lev_recursive(a.substr(1), b), lev_recursive(a, b.substr(1)),
                       lev_recursive(a.substr(1), b.substr(1))});
}

std::pair<bool, std::string> levenshtein_oracle() {
  std::vector<std::u32string> words = {U""};
  for (std::size_t len = 1, begin = 0; len <= kLevenshteinMaxLength; ++len) {
    const std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (words[i].size() != len - 1) continue;
      for (char32_t c : {U'a', U'b', U'c'}) words.push_back(words[i] + c);
    }
    begin = end;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0, mismatches = 0;
  for (const auto &a : words) {
    for (const auto &b : words) {
      ++pairs;
      if (levenshtein(a, b) != lev_recursive(a, b)) ++mismatches;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu strings, %zu pairs, %zu mismatches, %.1f s (limit %.0f s)", words.size(),
                pairs, mismatches, seconds, kLevenshteinBudgetSeconds);
  return {mismatches == 0 && seconds < kLevenshteinBudgetSeconds, buf};
}

std::pair<bool, std::string> metric_ordering() {
  std::mt19937 rng(20240501);
  const std::vector<std::string> vocab = {"o",  "a",     "no",      "na",   "porto", "tropas",
                                          "de", "Médio", "Oriente", "casa", ",",     "."};
  auto phrase = [&] {
    std::string out;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) out += (i ? " " : "") + vocab[rng() % vocab.size()];
    return out;
  };
  int violations = 0;
  for (int i = 0; i < kMetricPairs; ++i) {
    const std::string g = phrase();
    std::optional<std::string> p;
    switch (rng() % 4) {
      case 0: break;
      case 1: p = g; break;
      default: p = phrase();
    }
    const int e = exact_score(p, g);
    const double r = relaxed_f1(p, g);
    if (!(e <= r && r >= 0.0 && r <= 1.0 && (e == 0 || e == 1))) ++violations;
  }
  const double example = relaxed_f1(std::string("no Médio Oriente"), "o Médio Oriente");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d pairs ordered, relaxed example %.6f (want %.4f +- %.4f)",
                kMetricPairs - violations, kMetricPairs, example, kRelaxedExample, kRelaxedTolerance);
  return {violations == 0 && std::fabs(example - kRelaxedExample) <= kRelaxedTolerance, buf};
}

AlignResult align_fixture(ProviderBundle &providers, int parallelism = 1) {
  return align_corpus(read_corpus(kFixtures / "corpus.jsonl"), providers, PipelineConfig{}, parallelism);
}

std::pair<bool, std::string> partition() {
  auto providers = load_fixture_bundle(kFixtures);
  const auto result = align_fixture(providers);
  std::map<std::tuple<std::string, std::string, std::string>, std::string> expected;
  for (const auto &[line, cells] : read_table(kFixtures / "expected_methods.tsv", 4)) {
    expected[{cells[0], cells[1], cells[2]}] = cells[3];
  }
  std::size_t total = 0, matched = 0;
  std::map<AlignmentMethod, std::size_t> per_method;
  for (const auto &s : result.sentences) {
    for (const auto &a : s.annotations) {
      ++total;
      ++per_method[a.method];
      auto it = expected.find({s.sentence.doc_id, s.sentence.sent_id, a.source.id});
      if (it != expected.end() && it->second == to_string(a.method)) ++matched;
    }
  }
  std::size_t sum = 0;
  std::string counts;
  for (const auto &[m, n] : per_method) {
    sum += n;
    counts += std::string(counts.empty() ? "" : " ") + std::string(to_string(m)) + "=" + std::to_string(n);
  }
  bool every_strategy = true;
  for (AlignmentMethod m : kStrategyMethods) every_strategy = every_strategy && per_method[m] >= 2;
  const bool ok = total == kFixtureAnnotations && sum == kFixtureAnnotations && matched == expected.size() &&
                  expected.size() == kFixtureAnnotations && result.stats.total() == kFixtureAnnotations &&
                  every_strategy;
  return {ok, std::to_string(matched) + "/" + std::to_string(expected.size()) + " match the expectation table; " +
                  counts};
}

std::pair<bool, std::string> soldiers() {
  auto providers = load_fixture_bundle(kFixtures);
  AnnotatedSentence s;
  s.doc_id = "soldiers";
  s.sent_id = "1";
  s.text = "The soldiers were ordered to fire their weapons.";
  s.annotations = {{"t1", AnnotationKind::Trigger, "Conflict:Attack", Span{29, 33}, "fire"}};
  const auto aligned = align_sentence(s, providers, PipelineConfig{});
  const auto &a = aligned.annotations.at(0);
  const std::string surface = a.aligned_surface.value_or("<none>");
  const bool ok = a.method == AlignmentMethod::MTrans && surface == "disparar" && surface != "incêndio";
  return {ok, "\"fire\" -> \"" + surface + "\" via " + std::string(to_string(a.method)) + " (term translation \"" +
                  a.term_translation + "\")"};
}

// Brute force over whitespace-separated ASCII sentences: token offsets are
// computed here, independently of the tokenizer.
std::optional<Span> aligner_oracle(const std::vector<std::string> &src, const std::vector<std::string> &tgt,
                                   Span a, const std::vector<std::vector<double>> &p, double threshold,
                                   double ratio, std::size_t slack) {
  auto offsets = [](const std::vector<std::string> &words) {
    std::vector<Span> out;
    std::size_t at = 0;
    for (const auto &w : words) {
      out.push_back(Span{at, at + w.size()});
      at += w.size() + 1;
    }
    return out;
  };
  const auto so = offsets(src), to = offsets(tgt);
  std::vector<std::size_t> selected;
  std::size_t source_tokens = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!(so[i].start < a.end && a.start < so[i].end)) continue;
    ++source_tokens;
    std::vector<std::size_t> row;
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      if (p[i][j] > threshold) row.push_back(j);
    }
    if (row.empty()) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < tgt.size(); ++j) {
        if (p[i][j] > p[i][best]) best = j;
      }
      row.push_back(best);
    }
    selected.insert(selected.end(), row.begin(), row.end());
  }
  if (selected.empty()) return std::nullopt;
  const std::size_t lo = *std::min_element(selected.begin(), selected.end());
  const std::size_t hi = *std::max_element(selected.begin(), selected.end());
  const double limit = std::max(ratio * static_cast<double>(source_tokens), static_cast<double>(source_tokens + slack));
  if (static_cast<double>(hi - lo + 1) > limit) return std::nullopt;
  return Span{to[lo].start, to[hi].end};
}

std::pair<bool, std::string> aligner_oracle_check() {
  std::mt19937 rng(1867);
  const std::vector<std::string> vocab = {"as", "tropas", "entraram", "na", "cidade", "ao", "amanhecer",
                                          "o",  "porto",  "rebeldes", "de", "forte"};
  const PipelineConfig config;
  int agree = 0, projected = 0;
  std::string detail;
  for (int k = 0; k < kAlignerMatrices; ++k) {
    const std::size_t n = 2 + rng() % 8, m = 2 + rng() % 10;
    std::vector<std::string> src, tgt;
    for (std::size_t i = 0; i < n; ++i) src.push_back(vocab[rng() % vocab.size()]);
    for (std::size_t j = 0; j < m; ++j) tgt.push_back(vocab[rng() % vocab.size()]);
    std::vector<std::vector<double>> p(n, std::vector<double>(m));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto &row : p) {
      // Peaked rows, flat rows and everything between.
      const double sharp = 1.0 + 6.0 * u(rng);
      double sum = 0.0;
      for (auto &v : row) sum += (v = std::pow(u(rng), sharp));
      for (auto &v : row) v /= sum;
    }
    std::string s_src, s_trans;
    for (const auto &w : src) s_src += (s_src.empty() ? "" : " ") + w;
    for (const auto &w : tgt) s_trans += (s_trans.empty() ? "" : " ") + w;
    // Annotation over a random token range, sometimes starting mid-word.
    const std::size_t first = rng() % n, last = first + rng() % std::min<std::size_t>(3, n - first);
    std::size_t start = 0;
    for (std::size_t i = 0; i < first; ++i) start += src[i].size() + 1;
    std::size_t end = start;
    for (std::size_t i = first; i <= last; ++i) end += src[i].size() + (i == first ? 0 : 1);
    const Span a{start + (rng() % 2 ? 1 : 0), end};

    CallbackAligner aligner([&](const std::vector<std::string> &s, const std::vector<std::string> &t) {
      return make_matrix(s, t, p);
    });
    const auto got = word_aligner_match(s_src, s_trans, a, aligner, config);
    const auto want = aligner_oracle(src, tgt, a, p, config.aligner_prob_threshold, config.safeguard_ratio,
                                     config.safeguard_slack_tokens);
    if (got == want) ++agree;
    if (want) ++projected;
  }
  return {agree == kAlignerMatrices, std::to_string(agree) + "/" + std::to_string(kAlignerMatrices) +
                                         " matrices agree (" + std::to_string(projected) + " projected, " +
                                         std::to_string(kAlignerMatrices - projected) + " rejected)"};
}

std::pair<bool, std::string> safeguard() {
  const PipelineConfig config;  // ratio 2.0, slack 3
  const bool pass41 = size_safeguard(4, 1, config);
  const bool pass51 = size_safeguard(5, 1, config);
  std::mt19937 rng(3);
  int violations = 0;
  for (int i = 0; i < kSafeguardProperty; ++i) {
    PipelineConfig c;
    c.safeguard_ratio = 1.0 + (rng() % 40) / 10.0;
    c.safeguard_slack_tokens = rng() % 6;
    const std::size_t src = 1 + rng() % 20, cand = 1 + rng() % 60;
    const bool formula = static_cast<double>(cand) <=
                         std::max(c.safeguard_ratio * static_cast<double>(src), static_cast<double>(src + c.safeguard_slack_tokens));
    if (size_safeguard(cand, src, c) != formula) ++violations;
  }
  return {pass41 && !pass51 && violations == 0,
          std::string("(4,1) ") + (pass41 ? "passes" : "fails") + ", (5,1) " + (pass51 ? "passes" : "fails") + ", " +
              std::to_string(kSafeguardProperty - violations) + "/" + std::to_string(kSafeguardProperty) +
              " random cases agree with the formula"};
}

std::pair<bool, std::string> classifier() {
  const auto &lexicon = portuguese_lexicon();
  std::size_t detected = 0;
  for (const auto &c : lexicon.contractions) {
    const bool forward = classify_error(c.form + " Médio Oriente", c.determiner + " Médio Oriente") ==
                         ErrorClass::DeterminerContraction;
    const bool backward = classify_error(c.determiner + " fronteira", c.form + " fronteira") ==
                          ErrorClass::DeterminerContraction;
    if (forward && backward) ++detected;
  }
  const std::vector<std::pair<std::string, std::string>> controls = {
      {"o porto", "o forte"},       {"tropas", "as tropas"},     {"Médio Oriente", "o Médio Oriente"},
      {"em casa", "casa"},          {"no porto", "o forte"},     {"da casa", "a rua"},
      {"de a casa", "da casa"},     {"nos", "nós"},              {"o", "a"},
      {"pela capital", "capital"},  {"a coluna", "coluna"},   {"fogo", "disparar"},
      {"incêndio", "disparar"},     {"os soldados", "soldados"}, {"numa casa", "uma"},
      {"as suas armas", "as armas"}, {"dos rebeldes", "rebeldes"}};
  std::size_t false_positives = 0;
  for (const auto &[p, g] : controls) {
    if (classify_error(p, g) == ErrorClass::DeterminerContraction) ++false_positives;
  }
  const bool null_subject = classify_error(std::nullopt, "Nós") == ErrorClass::NullSubject &&
                            classify_error(std::nullopt, "nós") == ErrorClass::NullSubject;
  const bool ok = detected == lexicon.contractions.size() && false_positives == 0 && controls.size() == 17 &&
                  null_subject;
  return {ok, std::to_string(detected) + "/" + std::to_string(lexicon.contractions.size()) +
                  " contractions detected, " + std::to_string(false_positives) + "/" +
                  std::to_string(controls.size()) + " control false positives, NullSubject(\"Nós\") " +
                  (null_subject ? "yes" : "no")};
}

std::pair<bool, std::string> determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("xlap-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto first = load_fixture_bundle(kFixtures);
  auto second = load_fixture_bundle(kFixtures);
  write_aligned(dir / "run1.jsonl", align_fixture(first, 1).sentences);
  write_aligned(dir / "run2.jsonl", align_fixture(second, 4).sentences);
  const std::string a = read_bytes(dir / "run1.jsonl"), b = read_bytes(dir / "run2.jsonl");
  const std::size_t calls = first.transport->calls() + second.transport->calls();
  std::filesystem::remove_all(dir);
  return {!a.empty() && a == b && calls == 0,
          std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different") + ", " +
              std::to_string(calls) + " transport calls"};
}

std::pair<bool, std::string> order_search() {
  const auto dir = kFixtures / "order";
  const auto corpus = read_corpus(dir / "corpus.jsonl");
  const auto gold = read_gold_records(dir / "gold.jsonl");
  PipelineConfig base;
  base.strategy_order = parse_order("SMatch,WAligner,Fuzzy");
  auto p1 = load_fixture_bundle(dir);
  auto p2 = load_fixture_bundle(dir);
  const auto r1 = search_order(corpus, gold, p1, base, 1);
  const auto r2 = search_order(corpus, gold, p2, base, 4);
  const bool same = render_order_table(r1) == render_order_table(r2);
  const std::string best = format_order(r1.best);
  return {best == "SMatch,WAligner,Fuzzy" && same && r1.ranked.size() == 6,
          "best " + best + " of " + std::to_string(r1.ranked.size()) + " orders, reruns " +
              (same ? "identical" : "different")};
}

}  // namespace

int main() {
  check("edit-distance-oracle", levenshtein_oracle);
  check("metric-ordering", metric_ordering);
  check("pipeline-partition", partition);
  check("soldiers-mtrans", soldiers);
  check("aligner-projection-oracle", aligner_oracle_check);
  check("size-safeguard", safeguard);
  check("error-classifier", classifier);
  check("determinism-hermetic", determinism);
  check("order-search", order_search);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
