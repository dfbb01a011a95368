#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>

#include "xlap/providers.hpp"

namespace xlap {

/// cpp-httplib backed transport. At most `max_in_flight` requests are on the
/// wire at once across all threads.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(int max_in_flight = 4,
                            std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse send(const HttpRequest &request) override;

 private:
  std::counting_semaphore<256> slots_;
  std::chrono::seconds timeout_;
};

/// Splits "scheme://host[:port]/path?query" into ("scheme://host[:port]", "/path?query").
std::pair<std::string, std::string> split_url(const std::string &url);

struct TranslatorSettings {
  std::string endpoint = "https://api.cognitive.microsofttranslator.com";
  std::string key;
  /// Sent as Ocp-Apim-Subscription-Region when non-empty.
  std::string region;
  std::string source_language = "en";
};

/// Language code the translation API uses for each Portuguese variant.
std::string_view target_language_code(Variant variant);

/// Translator v3 `/translate` client. Sentence and term requests are identical;
/// terms are simply sent on their own, without context.
class HttpTranslator : public Translator {
 public:
  HttpTranslator(std::shared_ptr<HttpTransport> transport, TranslatorSettings settings,
                 RetryPolicy retry = {});
  std::string translate_sentence(const std::string &text, Variant variant) override;
  std::string translate_term(const std::string &term, Variant variant) override;

 private:
  std::string translate(const std::string &text, Variant variant);

  std::shared_ptr<HttpTransport> transport_;
  TranslatorSettings settings_;
  RetryPolicy retry_;
};

/// Translator v3 `/dictionary/lookup` client. Keeps provider order; no
/// part-of-speech filtering.
class HttpDictionary : public DictionaryLookup {
 public:
  HttpDictionary(std::shared_ptr<HttpTransport> transport, TranslatorSettings settings,
                 RetryPolicy retry = {});
  std::vector<std::string> lookup_alternatives(const std::string &term) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  TranslatorSettings settings_;
  RetryPolicy retry_;
};

/// Client for the embedding alignment service (POST /align, GET /health).
class HttpAlignerClient : public EmbedAlignerClient {
 public:
  HttpAlignerClient(std::shared_ptr<HttpTransport> transport, std::string base_url,
                    RetryPolicy retry = {});
  AlignmentMatrix alignment_matrix(const std::vector<std::string> &src_tokens,
                                   const std::vector<std::string> &tgt_tokens) override;
  /// Startup probe; returns the service's model_id or throws ProviderError.
  std::string health();

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::string base_url_;
  RetryPolicy retry_;
};

/// Parses an /align response body and checks it against the request.
AlignmentMatrix parse_align_response(const std::string &body,
                                     const std::vector<std::string> &src_tokens,
                                     const std::vector<std::string> &tgt_tokens);

struct LiveSettings {
  TranslatorSettings translator;
  TranslatorSettings dictionary;
  std::string aligner_url = "http://127.0.0.1:8000";
  /// Directory holding lemmas.tsv and thesaurus.tsv.
  std::filesystem::path tables_dir;
  int max_in_flight = 4;
  RetryPolicy retry;
};

/// Reads XLAP_TRANSLATOR_KEY, XLAP_DICT_KEY, XLAP_ALIGNER_URL and optional
/// XLAP_TRANSLATOR_REGION / XLAP_TRANSLATOR_URL. Throws std::runtime_error
/// naming the first missing key.
LiveSettings live_settings_from_env(const std::filesystem::path &tables_dir);

/// Live bundle. `transport` defaults to an HttplibTransport; tests pass a fake.
ProviderBundle make_live_bundle(const LiveSettings &settings, std::shared_ptr<ResponseCache> cache,
                                std::shared_ptr<HttpTransport> transport = nullptr);

}  // namespace xlap
