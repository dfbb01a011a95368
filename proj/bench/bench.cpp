#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "xlap/fixture_providers.hpp"
#include "xlap/io.hpp"
#include "xlap/pipeline.hpp"
#include "xlap/similarity.hpp"

using namespace xlap;

namespace {

const std::filesystem::path kFixtures = XLAP_FIXTURES_DIR;

// The fixture corpus repeated under fresh ids; responses stay cached.
std::vector<AnnotatedSentence> corpus(std::size_t copies) {
  const auto base = read_corpus(kFixtures / "corpus.jsonl");
  std::vector<AnnotatedSentence> out;
  for (std::size_t c = 0; c < copies; ++c) {
    for (auto s : base) {
      s.doc_id += "-" + std::to_string(c);
      out.push_back(std::move(s));
    }
  }
  return out;
}

void BM_AlignSerial(benchmark::State &state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)));
  auto providers = load_fixture_bundle(kFixtures);
  for (auto _ : state) benchmark::DoNotOptimize(align_corpus_serial(data, providers, PipelineConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}

void BM_AlignParallel(benchmark::State &state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)));
  auto providers = load_fixture_bundle(kFixtures);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(align_corpus(data, providers, PipelineConfig{}, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}

std::u32string random_text(std::mt19937 &rng, std::size_t n) {
  std::u32string s;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<char32_t>(U'a' + rng() % 6);
  return s;
}

void BM_Gestalt(benchmark::State &state) {
  std::mt19937 rng(1);
  const auto a = random_text(rng, static_cast<std::size_t>(state.range(0)));
  const auto b = random_text(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gestalt_similarity(a, b));
}

void BM_Levenshtein(benchmark::State &state) {
  std::mt19937 rng(2);
  const auto a = random_text(rng, static_cast<std::size_t>(state.range(0)));
  const auto b = random_text(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
}

}  // namespace

BENCHMARK(BM_AlignSerial)->Arg(50);
BENCHMARK(BM_AlignParallel)->Args({50, 1})->Args({50, 2})->Args({50, 4})->UseRealTime();
BENCHMARK(BM_Gestalt)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_Levenshtein)->Arg(16)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
