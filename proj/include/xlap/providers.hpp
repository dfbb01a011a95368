#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace xlap {

enum class Variant { European, Brazilian };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view name);

enum class ProviderErrorKind { Miss, Unavailable, RateLimited, Auth, Protocol };

std::string_view to_string(ProviderErrorKind kind);

/// Failure of an external capability. Rate limits and transient outages are
/// retryable; fixture misses, auth and protocol errors are not.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(ProviderErrorKind kind, const std::string &what);
  ProviderErrorKind kind() const { return kind_; }
  bool retryable() const {
    return kind_ == ProviderErrorKind::Unavailable || kind_ == ProviderErrorKind::RateLimited;
  }

 private:
  ProviderErrorKind kind_;
};

/// Row-stochastic token association matrix, rows are source tokens.
struct AlignmentMatrix {
  std::vector<std::string> src_tokens;
  std::vector<std::string> tgt_tokens;
  std::vector<double> probs;  // row-major, src_tokens.size() x tgt_tokens.size()

  std::size_t rows() const { return src_tokens.size(); }
  std::size_t cols() const { return tgt_tokens.size(); }
  double at(std::size_t i, std::size_t j) const { return probs[i * cols() + j]; }

  /// Throws ProviderError(Protocol) on wrong dimensions, entries outside
  /// [0,1], or rows not summing to 1 within 1e-6.
  void validate() const;
};

/// Builds a matrix from nested rows, then validates it.
AlignmentMatrix make_matrix(std::vector<std::string> src_tokens,
                            std::vector<std::string> tgt_tokens,
                            const std::vector<std::vector<double>> &rows);

class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate_sentence(const std::string &text, Variant variant) = 0;
  virtual std::string translate_term(const std::string &term, Variant variant) = 0;
};

class DictionaryLookup {
 public:
  virtual ~DictionaryLookup() = default;
  /// Alternative translations of `term`, most probable first.
  virtual std::vector<std::string> lookup_alternatives(const std::string &term) = 0;
};

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::vector<std::string> lemmatize(const std::vector<std::string> &tokens,
                                             std::string_view language) const = 0;
};

class Thesaurus {
 public:
  virtual ~Thesaurus() = default;
  virtual std::vector<std::string> synonyms(const std::string &term,
                                            std::string_view language) const = 0;
};

class EmbedAlignerClient {
 public:
  virtual ~EmbedAlignerClient() = default;
  virtual AlignmentMatrix alignment_matrix(const std::vector<std::string> &src_tokens,
                                           const std::vector<std::string> &tgt_tokens) = 0;
};

/// Removes later entries equal to an earlier one under case folding.
std::vector<std::string> dedupe_case_insensitive(std::vector<std::string> items);

/// Exact-key response store, optionally persisted as an append-only JSONL
/// file. Many concurrent readers; writers are serialized.
class ResponseCache {
 public:
  /// In-memory only.
  ResponseCache() = default;
  /// Loads `dir`/responses.jsonl if present and appends new entries to it.
  explicit ResponseCache(const std::filesystem::path &dir);

  /// Builds a cache key from its parts (a JSON array string).
  static std::string key(std::initializer_list<std::string_view> parts);

  std::optional<std::string> get(const std::string &key) const;
  void put(const std::string &key, const std::string &value);
  std::size_t size() const;
  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string> entries_;
  std::optional<std::filesystem::path> file_;
  std::ofstream out_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{250};
  /// Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  static RetryPolicy no_sleep();
};

/// Runs `fn`, retrying retryable ProviderErrors with exponential backoff
/// (base_delay, 2*base_delay, ...). Other errors propagate immediately.
template <typename Fn>
auto with_retry(const RetryPolicy &policy, Fn &&fn) -> decltype(fn()) {
  std::chrono::milliseconds delay = policy.base_delay;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const ProviderError &e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
    }
    if (policy.sleep) policy.sleep(delay);
    delay *= 2;
  }
}

// Cache decorators. Every call with the same arguments after the first is
// served from the cache without touching the wrapped provider.

class CachingTranslator : public Translator {
 public:
  CachingTranslator(std::shared_ptr<Translator> inner, std::shared_ptr<ResponseCache> cache);
  std::string translate_sentence(const std::string &text, Variant variant) override;
  std::string translate_term(const std::string &term, Variant variant) override;

 private:
  std::shared_ptr<Translator> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

class CachingDictionary : public DictionaryLookup {
 public:
  CachingDictionary(std::shared_ptr<DictionaryLookup> inner, std::shared_ptr<ResponseCache> cache);
  std::vector<std::string> lookup_alternatives(const std::string &term) override;

 private:
  std::shared_ptr<DictionaryLookup> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

class CachingAligner : public EmbedAlignerClient {
 public:
  CachingAligner(std::shared_ptr<EmbedAlignerClient> inner, std::shared_ptr<ResponseCache> cache);
  AlignmentMatrix alignment_matrix(const std::vector<std::string> &src_tokens,
                                   const std::vector<std::string> &tgt_tokens) override;

 private:
  std::shared_ptr<EmbedAlignerClient> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

struct HttpRequest {
  std::string method;  // "GET" or "POST"
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Network boundary for live providers. Connection failures raise
/// ProviderError(Unavailable); HTTP statuses are returned as-is.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest &request) = 0;
};

/// Counts (and optionally records) every request passed to the wrapped
/// transport. With no inner transport every send fails as Unavailable.
class InstrumentedTransport : public HttpTransport {
 public:
  explicit InstrumentedTransport(std::shared_ptr<HttpTransport> inner = nullptr);
  HttpResponse send(const HttpRequest &request) override;
  std::size_t calls() const { return calls_.load(); }
  std::vector<HttpRequest> requests() const;

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mutex_;
  std::vector<HttpRequest> requests_;
};

/// Maps an HTTP status to the matching ProviderError, or returns for 2xx.
void raise_for_status(const HttpResponse &response, std::string_view what);

struct ProviderBundle {
  std::shared_ptr<Translator> translator;
  std::shared_ptr<DictionaryLookup> dictionary;
  std::shared_ptr<Lemmatizer> lemmatizer;
  std::shared_ptr<Thesaurus> thesaurus;
  std::shared_ptr<EmbedAlignerClient> aligner;
  std::shared_ptr<ResponseCache> cache;
  /// Every network call made by the bundle's live providers goes through here.
  std::shared_ptr<InstrumentedTransport> transport;

  bool complete() const {
    return translator && dictionary && lemmatizer && thesaurus && aligner && cache && transport;
  }
};

/// Target language code passed to the lemmatizer and thesaurus.
inline constexpr std::string_view kTargetLanguage = "pt";

}  // namespace xlap
