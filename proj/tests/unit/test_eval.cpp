#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "xlap/eval.hpp"
#include "xlap/fixture_providers.hpp"
#include "xlap/io.hpp"

using namespace xlap;

namespace {

// Sentence whose translation contains `preds` verbatim; each prediction is
// aligned (or left unaligned when empty).
AlignedSentence sentence_with(const std::string &doc, const std::string &translation,
                              const std::vector<std::pair<AnnotationKind, std::string>> &preds) {
  AlignedSentence s;
  s.sentence.doc_id = doc;
  s.sentence.sent_id = "1";
  s.sentence.text = "x";
  s.sentence.translation = translation;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    AlignedAnnotation a;
    a.source = {"a" + std::to_string(i), preds[i].first, "L", Span{0, 1}, "x"};
    if (!preds[i].second.empty()) {
      const auto at = char_length(translation.substr(0, translation.find(preds[i].second)));
      a.aligned_span = Span{at, at + char_length(preds[i].second)};
      a.aligned_surface = preds[i].second;
      a.method = AlignmentMethod::SMatch;
    }
    s.annotations.push_back(a);
  }
  return s;
}

GoldAlignment gold_for(const std::string &doc, std::size_t i, const std::string &translation,
                       const std::string &surface) {
  const auto at = char_length(translation.substr(0, translation.find(surface)));
  return {doc, "1", "a" + std::to_string(i), Span{at, at + char_length(surface)}, surface};
}

}  // namespace

TEST_CASE("exact and relaxed metrics") {
  CHECK(exact_score(std::string("o porto"), "o porto") == 1);
  CHECK(exact_score(std::string("o Porto"), "o porto") == 0);
  CHECK(exact_score(std::nullopt, "o porto") == 0);

  CHECK(relaxed_f1(std::string("no Médio Oriente"), "o Médio Oriente") == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(relaxed_f1(std::string("tropas"), "tropas") == 1.0);
  CHECK(relaxed_f1(std::nullopt, "tropas") == 0.0);
  CHECK(relaxed_f1(std::string("as armas"), "tropas") == 0.0);
  // Multiset: a repeated token counts once per occurrence.
  CHECK(relaxed_f1(std::string("o o"), "o") == doctest::Approx(2.0 / 3.0));
  CHECK(relaxed_f1(std::string("a coluna"), "coluna") == doctest::Approx(2.0 / 3.0));
  // Punctuation is a token of its own.
  CHECK(relaxed_f1(std::string("Lisboa."), "Lisboa") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("relaxed never falls below exact") {
  std::mt19937 rng(7);
  const std::vector<std::string> vocab = {"o", "a", "porto", "tropas", "no", "Médio", "Oriente", "de"};
  auto phrase = [&] {
    std::string out;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) out += (i ? " " : "") + vocab[rng() % vocab.size()];
    return out;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string p = phrase(), g = phrase();
    const double r = relaxed_f1(p, g);
    CHECK(r >= exact_score(p, g));
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("error classifier") {
  CHECK(classify_error(std::string("no Médio Oriente"), "o Médio Oriente") == ErrorClass::DeterminerContraction);
  CHECK(classify_error(std::string("o Médio Oriente"), "no Médio Oriente") == ErrorClass::DeterminerContraction);
  CHECK(classify_error(std::string("Na explosão"), "a explosão") == ErrorClass::DeterminerContraction);
  CHECK(classify_error(std::string("pela capital"), "a capital") == ErrorClass::DeterminerContraction);
  CHECK(classify_error(std::string("na explosão"), "na explosão") == ErrorClass::Correct);
  CHECK(classify_error(std::string("no porto"), "o forte") == ErrorClass::Other);
  CHECK(classify_error(std::string("fogo"), "disparar") == ErrorClass::Other);
  CHECK(classify_error(std::string("nos"), "nós") == ErrorClass::Other);

  CHECK(classify_error(std::nullopt, "Nós") == ErrorClass::NullSubject);
  CHECK(classify_error(std::nullopt, "ele") == ErrorClass::NullSubject);
  CHECK(classify_error(std::nullopt, "a coluna") == ErrorClass::Other);
  CHECK(classify_error(std::nullopt, "a coluna", true) == ErrorClass::NullSubject);

  CHECK(portuguese_lexicon().contractions.size() == 18);
  for (const auto &c : portuguese_lexicon().contractions) {
    CHECK(classify_error(c.form + " casa", c.determiner + " casa") == ErrorClass::DeterminerContraction);
  }
}

TEST_CASE("evaluate on the fixture corpus") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  const auto aligned = align_corpus_serial(corpus, providers, PipelineConfig{}).sentences;
  const auto gold = read_gold(test::fixtures_dir() / "gold.jsonl", aligned);
  const auto report = evaluate(aligned, gold);

  CHECK(report.overall.support == 29);
  CHECK(report.overall.exact_sum == 25.0);
  CHECK(report.overall.error_count(ErrorClass::Correct) == 25);
  CHECK(report.overall.error_count(ErrorClass::Other) == 1);
  CHECK(report.overall.error_count(ErrorClass::DeterminerContraction) == 3);
  CHECK(report.cell(AnnotationKind::Trigger).support == 9);
  CHECK(report.cell(AnnotationKind::Argument).support == 20);
  CHECK(report.cell(AnnotationKind::Trigger).exact() == doctest::Approx(8.0 / 9.0));
  CHECK(report.cell(AnnotationKind::Argument).exact() == doctest::Approx(17.0 / 20.0));
  // Each contraction miss scores 0.5 relaxed.
  CHECK(report.overall.relaxed() == doctest::Approx(26.5 / 29.0));
  CHECK(report.cell(AlignmentMethod::SMatch, AnnotationKind::Argument).support > 0);
  CHECK(report.cell(AlignmentMethod::Synonym, AnnotationKind::Argument).support == 0);
  CHECK(std::is_sorted(report.annotations.begin(), report.annotations.end(), [](const auto &x, const auto &y) {
    return std::tie(x.doc_id, x.sent_id, x.annotation_id) < std::tie(y.doc_id, y.sent_id, y.annotation_id);
  }));

  std::size_t by_method = 0;
  for (AlignmentMethod m : kAllMethods) by_method += report.method_cell(m).support;
  CHECK(by_method == 29);
}

TEST_CASE("evaluate is invariant to record order") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  auto aligned = align_corpus_serial(corpus, providers, PipelineConfig{}).sentences;
  auto gold = read_gold(test::fixtures_dir() / "gold.jsonl", aligned);
  const auto reference = render_eval_csv(evaluate(aligned, gold));
  std::mt19937 rng(11);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(aligned.begin(), aligned.end(), rng);
    std::shuffle(gold.begin(), gold.end(), rng);
    CHECK(render_eval_csv(evaluate(aligned, gold)) == reference);
  }
}

TEST_CASE("micro averaging and error attribution") {
  const std::string tr = "No Médio Oriente, as tropas entraram no porto.";
  const auto s = sentence_with("x", tr,
                               {{AnnotationKind::Argument, "No Médio Oriente"},
                                {AnnotationKind::Argument, "tropas"},
                                {AnnotationKind::Trigger, ""},
                                {AnnotationKind::Trigger, "entraram"}});
  std::vector<GoldAlignment> gold = {gold_for("x", 0, tr, "Médio Oriente"), gold_for("x", 1, tr, "as tropas"),
                                     gold_for("x", 2, tr, "entraram"), gold_for("x", 3, tr, "entraram")};
  const auto report = evaluate(std::vector{s}, gold);
  CHECK(report.overall.support == 4);
  CHECK(report.overall.exact() == doctest::Approx(0.25));
  // 0.8 + 2/3 + 0 + 1
  CHECK(report.overall.relaxed() == doctest::Approx((0.8 + 2.0 / 3.0 + 1.0) / 4.0));
  CHECK(report.cell(AnnotationKind::Trigger).exact() == doctest::Approx(0.5));
  CHECK(report.cell(AlignmentMethod::Unaligned, AnnotationKind::Trigger).support == 1);
  CHECK(report.overall.error_count(ErrorClass::Other) == 3);
}

TEST_CASE("dangling gold is an error") {
  const std::string tr = "As tropas entraram.";
  const auto s = sentence_with("x", tr, {{AnnotationKind::Argument, "tropas"}});
  auto g = gold_for("x", 0, tr, "tropas");
  g.annotation_id = "missing";
  CHECK_THROWS_AS(evaluate(std::vector{s}, std::vector{g}), DanglingReferenceError);
  g = gold_for("y", 0, tr, "tropas");
  CHECK_THROWS_AS(evaluate(std::vector{s}, std::vector{g}), DanglingReferenceError);
  g = gold_for("x", 0, tr, "tropas");
  g.gold_surface = "soldados";
  CHECK_THROWS_AS(evaluate(std::vector{s}, std::vector{g}), LoadError);
}

TEST_CASE("empty evaluation") {
  const auto report = evaluate({}, {});
  CHECK(report.overall.support == 0);
  CHECK(report.overall.exact() == 0.0);
  CHECK(report.annotations.empty());
}
