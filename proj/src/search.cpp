#include <algorithm>
#include <cmath>
#include <exception>

#include <omp.h>

#include "xlap/eval.hpp"

namespace xlap {

void prefetch_providers(std::span<const AnnotatedSentence> corpus, ProviderBundle &providers,
                        const PipelineConfig &config) {
  for (const auto &s : corpus) {
    std::optional<std::string> translation = s.translation;
    try {
      if (!translation) translation = providers.translator->translate_sentence(s.text, config.variant);
    } catch (const ProviderError &) {
      continue;
    }
    for (const auto &a : s.annotations) {
      try {
        providers.translator->translate_term(a.surface, config.variant);
      } catch (const ProviderError &) {
      }
      try {
        providers.dictionary->lookup_alternatives(a.surface);
      } catch (const ProviderError &) {
      }
    }
    const TokenizedText src = tokenize(s.text);
    const TokenizedText tgt = tokenize(*translation);
    if (s.annotations.empty() || src.empty() || tgt.empty()) continue;
    try {
      providers.aligner->alignment_matrix(src.surfaces(), tgt.surfaces());
    } catch (const ProviderError &) {
    }
  }
}

namespace {

bool nearly_equal(double a, double b) { return std::fabs(a - b) <= 1e-12; }

bool ranks_before(const OrderScore &x, const OrderScore &y) {
  if (!nearly_equal(x.exact, y.exact)) return x.exact > y.exact;
  if (!nearly_equal(x.relaxed, y.relaxed)) return x.relaxed > y.relaxed;
  return format_order(x.order) < format_order(y.order);
}

}  // namespace

OrderSearchResult search_order(std::span<const AnnotatedSentence> corpus,
                               std::span<const GoldAlignment> gold, ProviderBundle &providers,
                               const PipelineConfig &base, int parallelism) {
  base.validate();
  if (parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");

  std::vector<AlignmentMethod> order = base.strategy_order;
  std::sort(order.begin(), order.end());
  std::vector<std::vector<AlignmentMethod>> orders;
  do {
    orders.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));

  prefetch_providers(corpus, providers, base);

  std::vector<OrderScore> scores(orders.size());
  std::vector<std::exception_ptr> errors(orders.size());
  const auto n = static_cast<std::ptrdiff_t>(orders.size());
#pragma omp parallel for num_threads(parallelism) schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      PipelineConfig config = base;
      config.strategy_order = orders[i];
      const AlignResult result = align_corpus_serial(corpus, providers, config);
      const EvalReport report = evaluate(result.sentences, gold);
      scores[i] = OrderScore{orders[i], report.overall.exact(), report.overall.relaxed()};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::sort(scores.begin(), scores.end(), ranks_before);
  OrderSearchResult result;
  result.best = scores.front().order;
  result.ranked = std::move(scores);
  return result;
}

}  // namespace xlap
