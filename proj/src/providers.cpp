#include "xlap/providers.hpp"

#include <cmath>
#include <set>
#include <thread>

#include "json.hpp"
#include "xlap/text.hpp"

namespace xlap {

using Json = nlohmann::json;

std::string_view to_string(Variant variant) {
  return variant == Variant::European ? "european" : "brazilian";
}

Variant parse_variant(std::string_view name) {
  if (name == "european") return Variant::European;
  if (name == "brazilian") return Variant::Brazilian;
  throw std::invalid_argument("unknown variant '" + std::string(name) +
                              "' (expected european or brazilian)");
}

std::string_view to_string(ProviderErrorKind kind) {
  switch (kind) {
    case ProviderErrorKind::Miss: return "miss";
    case ProviderErrorKind::Unavailable: return "unavailable";
    case ProviderErrorKind::RateLimited: return "rate-limited";
    case ProviderErrorKind::Auth: return "auth";
    case ProviderErrorKind::Protocol: return "protocol";
  }
  return "unavailable";
}

ProviderError::ProviderError(ProviderErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void AlignmentMatrix::validate() const {
  if (src_tokens.empty() || tgt_tokens.empty()) {
    throw ProviderError(ProviderErrorKind::Protocol, "alignment matrix has an empty dimension");
  }
  if (probs.size() != rows() * cols()) {
    throw ProviderError(ProviderErrorKind::Protocol,
                        "alignment matrix has " + std::to_string(probs.size()) +
                            " entries, expected " + std::to_string(rows()) + "x" +
                            std::to_string(cols()));
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      const double p = at(i, j);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ProviderError(ProviderErrorKind::Protocol,
                            "alignment probability out of [0,1] at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ProviderError(ProviderErrorKind::Protocol,
                          "alignment row " + std::to_string(i) + " sums to " +
                              std::to_string(sum) + ", not 1");
    }
  }
}

AlignmentMatrix make_matrix(std::vector<std::string> src_tokens,
                            std::vector<std::string> tgt_tokens,
                            const std::vector<std::vector<double>> &rows) {
  AlignmentMatrix m;
  m.src_tokens = std::move(src_tokens);
  m.tgt_tokens = std::move(tgt_tokens);
  if (rows.size() != m.rows()) {
    throw ProviderError(ProviderErrorKind::Protocol,
                        "alignment matrix has " + std::to_string(rows.size()) + " rows for " +
                            std::to_string(m.rows()) + " source tokens");
  }
  for (const auto &row : rows) {
    if (row.size() != m.cols()) {
      throw ProviderError(ProviderErrorKind::Protocol,
                          "alignment matrix row has " + std::to_string(row.size()) +
                              " columns for " + std::to_string(m.cols()) + " target tokens");
    }
    m.probs.insert(m.probs.end(), row.begin(), row.end());
  }
  m.validate();
  return m;
}

std::vector<std::string> dedupe_case_insensitive(std::vector<std::string> items) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto &item : items) {
    if (seen.insert(fold_case(item)).second) out.push_back(std::move(item));
  }
  return out;
}

ResponseCache::ResponseCache(const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  file_ = dir / "responses.jsonl";
  if (std::ifstream in(*file_); in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // A torn final line from an interrupted run is skipped.
      Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_array() || j.size() != 2 || !j[0].is_string() ||
          !j[1].is_string()) {
        continue;
      }
      entries_[j[0].get<std::string>()] = j[1].get<std::string>();
    }
  }
  bool torn_tail = false;
  if (std::ifstream in(*file_, std::ios::binary | std::ios::ate); in && in.tellg() > 0) {
    in.seekg(-1, std::ios::end);
    torn_tail = in.get() != '\n';
  }
  out_.open(*file_, std::ios::app | std::ios::binary);
  if (!out_) throw std::runtime_error("cannot open cache file '" + file_->string() + "'");
  if (torn_tail) out_ << '\n';
}

std::string ResponseCache::key(std::initializer_list<std::string_view> parts) {
  Json j = Json::array();
  for (auto p : parts) j.push_back(std::string(p));
  return j.dump();
}

std::optional<std::string> ResponseCache::get(const std::string &key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void ResponseCache::put(const std::string &key, const std::string &value) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, value);
  if (!inserted) return;
  if (file_) {
    out_ << Json::array({key, value}).dump() << '\n';
    out_.flush();
  }
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

RetryPolicy RetryPolicy::no_sleep() {
  RetryPolicy p;
  p.sleep = nullptr;
  return p;
}

CachingTranslator::CachingTranslator(std::shared_ptr<Translator> inner,
                                     std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::string CachingTranslator::translate_sentence(const std::string &text, Variant variant) {
  const auto k = ResponseCache::key({"translate_sentence", to_string(variant), text});
  if (auto hit = cache_->get(k)) return *hit;
  std::string out = inner_->translate_sentence(text, variant);
  cache_->put(k, out);
  return out;
}

std::string CachingTranslator::translate_term(const std::string &term, Variant variant) {
  const auto k = ResponseCache::key({"translate_term", to_string(variant), term});
  if (auto hit = cache_->get(k)) return *hit;
  std::string out = inner_->translate_term(term, variant);
  cache_->put(k, out);
  return out;
}

CachingDictionary::CachingDictionary(std::shared_ptr<DictionaryLookup> inner,
                                     std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::vector<std::string> CachingDictionary::lookup_alternatives(const std::string &term) {
  const auto k = ResponseCache::key({"lookup_alternatives", term});
  if (auto hit = cache_->get(k)) return Json::parse(*hit).get<std::vector<std::string>>();
  auto out = dedupe_case_insensitive(inner_->lookup_alternatives(term));
  cache_->put(k, Json(out).dump());
  return out;
}

CachingAligner::CachingAligner(std::shared_ptr<EmbedAlignerClient> inner,
                               std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

AlignmentMatrix CachingAligner::alignment_matrix(const std::vector<std::string> &src_tokens,
                                                 const std::vector<std::string> &tgt_tokens) {
  const auto k = ResponseCache::key(
      {"alignment_matrix", Json(src_tokens).dump(), Json(tgt_tokens).dump()});
  if (auto hit = cache_->get(k)) {
    const Json j = Json::parse(*hit);
    AlignmentMatrix m{src_tokens, tgt_tokens, j.get<std::vector<double>>()};
    m.validate();
    return m;
  }
  AlignmentMatrix m = inner_->alignment_matrix(src_tokens, tgt_tokens);
  if (m.src_tokens.size() != src_tokens.size() || m.tgt_tokens.size() != tgt_tokens.size()) {
    throw ProviderError(ProviderErrorKind::Protocol, "aligner returned a matrix for different tokens");
  }
  m.validate();
  cache_->put(k, Json(m.probs).dump());
  return m;
}

InstrumentedTransport::InstrumentedTransport(std::shared_ptr<HttpTransport> inner)
    : inner_(std::move(inner)) {}

HttpResponse InstrumentedTransport::send(const HttpRequest &request) {
  ++calls_;
  {
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
  }
  if (!inner_) {
    throw ProviderError(ProviderErrorKind::Unavailable,
                        "network access is disabled (request to " + request.url + ")");
  }
  return inner_->send(request);
}

std::vector<HttpRequest> InstrumentedTransport::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

void raise_for_status(const HttpResponse &response, std::string_view what) {
  const int s = response.status;
  if (s >= 200 && s < 300) return;
  const std::string msg = std::string(what) + " returned HTTP " + std::to_string(s);
  if (s == 401 || s == 403) throw ProviderError(ProviderErrorKind::Auth, msg);
  if (s == 429) throw ProviderError(ProviderErrorKind::RateLimited, msg);
  if (s >= 500 || s == 408 || s == 0) throw ProviderError(ProviderErrorKind::Unavailable, msg);
  throw ProviderError(ProviderErrorKind::Protocol, msg);
}

}  // namespace xlap
