#include <doctest.h>

#include <map>
#include <tuple>

#include "support.hpp"
#include "xlap/fixture_providers.hpp"
#include "xlap/io.hpp"
#include "xlap/pipeline.hpp"

using namespace xlap;

namespace {

using Key = std::tuple<std::string, std::string, std::string>;

std::map<Key, AlignmentMethod> expected_methods() {
  std::map<Key, AlignmentMethod> out;
  for (const auto &[line, cells] : read_table(test::fixtures_dir() / "expected_methods.tsv", 4)) {
    out[{cells[0], cells[1], cells[2]}] = parse_method(cells[3]);
  }
  return out;
}

// Fails with `kind` for one specific input, delegates otherwise.
class FaultyTranslator : public Translator {
 public:
  FaultyTranslator(std::shared_ptr<Translator> inner, std::string poison, ProviderErrorKind kind)
      : inner_(std::move(inner)), poison_(std::move(poison)), kind_(kind) {}
  std::string translate_sentence(const std::string &text, Variant v) override {
    if (text == poison_) throw ProviderError(kind_, "scripted failure");
    return inner_->translate_sentence(text, v);
  }
  std::string translate_term(const std::string &term, Variant v) override {
    if (term == poison_) throw ProviderError(kind_, "scripted failure");
    return inner_->translate_term(term, v);
  }

 private:
  std::shared_ptr<Translator> inner_;
  std::string poison_;
  ProviderErrorKind kind_;
};

const AnnotatedSentence &find_sentence(const std::vector<AnnotatedSentence> &corpus, const std::string &doc,
                                       const std::string &sent) {
  for (const auto &s : corpus) {
    if (s.doc_id == doc && s.sent_id == sent) return s;
  }
  throw std::out_of_range("no such sentence");
}

}  // namespace

TEST_CASE("fixture corpus attribution matches the expectation table") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  const auto result = align_corpus_serial(corpus, providers, PipelineConfig{});
  const auto expected = expected_methods();
  std::size_t seen = 0;
  for (const auto &s : result.sentences) {
    CHECK(validate_aligned(s).empty());
    CHECK_FALSE(s.failure.has_value());
    for (const auto &a : s.annotations) {
      INFO(s.sentence.doc_id, "/", s.sentence.sent_id, " ", a.source.id);
      CHECK(a.method == expected.at({s.sentence.doc_id, s.sentence.sent_id, a.source.id}));
      ++seen;
    }
  }
  CHECK(seen == expected.size());
  CHECK(result.stats.total() == 30);
  CHECK(result.failures.empty());
  CHECK(providers.transport->calls() == 0);
}

TEST_CASE("parallel driver equals the serial reference") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto serial_providers = load_fixture_bundle(test::fixtures_dir());
  const auto serial = align_corpus_serial(corpus, serial_providers, PipelineConfig{});
  for (int threads : {1, 2, 4, 8}) {
    auto providers = load_fixture_bundle(test::fixtures_dir());
    const auto parallel = align_corpus(corpus, providers, PipelineConfig{}, threads);
    CHECK(parallel.sentences == serial.sentences);
    CHECK(parallel.stats == serial.stats);
    CHECK(parallel.elapsed_ms.size() == corpus.size());
  }
  auto providers = load_fixture_bundle(test::fixtures_dir());
  CHECK_THROWS_AS(align_corpus(corpus, providers, PipelineConfig{}, 0), std::invalid_argument);
}

TEST_CASE("first match wins and stops the pipeline") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  const auto aligned = align_sentence(find_sentence(corpus, "d1", "1"), providers, PipelineConfig{});
  const auto &warsaw = aligned.annotations[2];
  CHECK(warsaw.method == AlignmentMethod::SMatch);
  CHECK(warsaw.aligned_surface == "Varsóvia");
  REQUIRE(warsaw.candidates_tried.size() == 1);
  CHECK(warsaw.candidates_tried[0].matched);

  const auto &born = aligned.annotations[0];
  CHECK(born.method == AlignmentMethod::Lemma);
  CHECK(born.aligned_surface == "nasceu");
  REQUIRE(born.candidates_tried.size() == 2);
  CHECK_FALSE(born.candidates_tried[0].matched);
}

TEST_CASE("soldiers: fire aligns to disparar through MTrans") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  const auto aligned = align_sentence(find_sentence(corpus, "d1", "2"), providers, PipelineConfig{});
  const auto &fire = aligned.annotations[0];
  CHECK(fire.term_translation == "incêndio");
  CHECK(fire.method == AlignmentMethod::MTrans);
  CHECK(fire.aligned_surface == "disparar");
  CHECK(fire.candidates_tried.back().note.find("disparar") != std::string::npos);
}

TEST_CASE("kind gating and exhaustive misses") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  auto providers = load_fixture_bundle(test::fixtures_dir());
  PipelineConfig no_fuzzy;
  no_fuzzy.strategy_order = {AlignmentMethod::SMatch, AlignmentMethod::Lemma, AlignmentMethod::MTrans,
                             AlignmentMethod::Synonym, AlignmentMethod::WAligner};
  const auto aligned = align_sentence(find_sentence(corpus, "d4", "1"), providers, no_fuzzy);
  const auto &explosion = aligned.annotations[2];
  CHECK(explosion.method == AlignmentMethod::Unaligned);
  std::vector<AlignmentMethod> tried;
  for (const auto &c : explosion.candidates_tried) tried.push_back(c.method);
  CHECK(tried == std::vector{AlignmentMethod::SMatch, AlignmentMethod::Lemma, AlignmentMethod::MTrans,
                             AlignmentMethod::WAligner});
  // No aligner matrix for this sentence pair: a strategy miss, not a failure.
  CHECK(explosion.candidates_tried.back().note.find("aligner") != std::string::npos);
  CHECK_FALSE(aligned.failure.has_value());

  const auto resigned = align_sentence(find_sentence(corpus, "d4", "2"), providers, PipelineConfig{});
  for (const auto &c : resigned.annotations[0].candidates_tried) CHECK(c.method != AlignmentMethod::Fuzzy);
  CHECK(resigned.annotations[0].candidates_tried.back().note.find("safeguard") != std::string::npos);
}

TEST_CASE("hard provider failures fail only their sentence") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  const std::string poison = "Rebels attacked the convoy near the border.";
  auto providers = load_fixture_bundle(test::fixtures_dir());
  providers.translator = std::make_shared<FaultyTranslator>(providers.translator, poison,
                                                            ProviderErrorKind::Unavailable);
  const auto result = align_corpus(corpus, providers, PipelineConfig{}, 2);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].rfind("d2/1: ", 0) == 0);
  for (const auto &s : result.sentences) {
    CHECK(validate_aligned(s).empty());
    if (s.sentence.text == poison) {
      CHECK(s.failure.has_value());
      CHECK_FALSE(s.sentence.translation.has_value());
      for (const auto &a : s.annotations) CHECK(a.method == AlignmentMethod::Unaligned);
    } else {
      CHECK_FALSE(s.failure.has_value());
    }
  }
  CHECK(result.stats.total() == 30);
}

TEST_CASE("a failing term translation") {
  const auto corpus = read_corpus(test::fixtures_dir() / "corpus.jsonl");
  const auto &soldiers = find_sentence(corpus, "d1", "2");

  SUBCASE("miss: strategies that need no term still run") {
    auto providers = load_fixture_bundle(test::fixtures_dir());
    providers.translator = std::make_shared<FaultyTranslator>(providers.translator, "fire", ProviderErrorKind::Miss);
    const auto aligned = align_sentence(soldiers, providers, PipelineConfig{});
    const auto &fire = aligned.annotations[0];
    CHECK(fire.term_translation.empty());
    CHECK(fire.method == AlignmentMethod::MTrans);
    CHECK(fire.aligned_surface == "disparar");
    CHECK(fire.candidates_tried.front().note.find("term translation") != std::string::npos);
  }
  SUBCASE("auth: the sentence fails") {
    auto providers = load_fixture_bundle(test::fixtures_dir());
    providers.translator = std::make_shared<FaultyTranslator>(providers.translator, "fire", ProviderErrorKind::Auth);
    const auto aligned = align_sentence(soldiers, providers, PipelineConfig{});
    CHECK(aligned.failure.has_value());
    for (const auto &a : aligned.annotations) CHECK(a.method == AlignmentMethod::Unaligned);
  }
}

TEST_CASE("a supplied translation is used as is") {
  AnnotatedSentence s;
  s.doc_id = "x";
  s.sent_id = "1";
  s.text = "Police arrested the suspect.";
  s.translation = "A polícia prendeu o suspeito.";
  s.annotations = {{"a1", AnnotationKind::Argument, "Person", Span{16, 27}, "the suspect"}};
  auto providers = load_fixture_bundle(test::fixtures_dir());
  const auto aligned = align_sentence(s, providers, PipelineConfig{});
  CHECK(aligned.sentence.translation == "A polícia prendeu o suspeito.");
  CHECK(aligned.annotations[0].aligned_surface == "o suspeito");

  s.translation = "";
  const auto empty = align_sentence(s, providers, PipelineConfig{});
  CHECK(empty.failure.has_value());
}

TEST_CASE("method stats") {
  MethodStats empty = method_stats({});
  CHECK(empty.total() == 0);
  for (AlignmentMethod m : kAllMethods) CHECK(empty.count(m, AnnotationKind::Trigger) == 0);

  MethodStats a;
  a.add(AlignmentMethod::SMatch, AnnotationKind::Trigger, Split::Train, 3);
  a.add(AlignmentMethod::Fuzzy, AnnotationKind::Argument, Split::Test);
  MethodStats b = a;
  b += a;
  CHECK(b.count(AlignmentMethod::SMatch, AnnotationKind::Trigger, Split::Train) == 6);
  CHECK(b.total(AnnotationKind::Argument) == 2);
  CHECK(b.total(AnnotationKind::Trigger, Split::Train) == 6);
  CHECK(b.total() == 8);
}
