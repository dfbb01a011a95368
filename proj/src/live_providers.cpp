#include "xlap/live_providers.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "xlap/fixture_providers.hpp"

namespace xlap {

using Json = nlohmann::json;

namespace {

Json parse_body(const std::string &body, std::string_view what) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    throw ProviderError(ProviderErrorKind::Protocol, std::string(what) + " returned malformed JSON");
  }
  return j;
}

std::vector<std::pair<std::string, std::string>> azure_headers(const TranslatorSettings &s) {
  std::vector<std::pair<std::string, std::string>> h = {
      {"Ocp-Apim-Subscription-Key", s.key}, {"Content-Type", "application/json; charset=UTF-8"}};
  if (!s.region.empty()) h.emplace_back("Ocp-Apim-Subscription-Region", s.region);
  return h;
}

std::string trim_slash(std::string s) {
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

std::string env_or(const char *name, std::string fallback) {
  const char *v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

}  // namespace

std::pair<std::string, std::string> split_url(const std::string &url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("URL without scheme: '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

HttplibTransport::HttplibTransport(int max_in_flight, std::chrono::seconds timeout)
    : slots_(std::max(1, std::min(max_in_flight, 256))), timeout_(timeout) {}

HttpResponse HttplibTransport::send(const HttpRequest &request) {
  auto [origin, path] = split_url(request.url);
  slots_.acquire();
  struct Release {
    std::counting_semaphore<256> &s;
    ~Release() { s.release(); }
  } release{slots_};

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto &[k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }
  httplib::Result result = request.method == "GET"
                               ? client.Get(path, headers)
                               : client.Post(path, headers, request.body, content_type);
  if (!result) {
    throw ProviderError(ProviderErrorKind::Unavailable,
                        "request to " + origin + " failed: " + httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

std::string_view target_language_code(Variant variant) {
  return variant == Variant::European ? "pt-pt" : "pt";
}

HttpTranslator::HttpTranslator(std::shared_ptr<HttpTransport> transport, TranslatorSettings settings,
                               RetryPolicy retry)
    : transport_(std::move(transport)), settings_(std::move(settings)), retry_(std::move(retry)) {}

std::string HttpTranslator::translate(const std::string &text, Variant variant) {
  HttpRequest req;
  req.method = "POST";
  req.url = trim_slash(settings_.endpoint) + "/translate?api-version=3.0&from=" +
            settings_.source_language + "&to=" + std::string(target_language_code(variant));
  req.headers = azure_headers(settings_);
  req.body = Json::array({{{"Text", text}}}).dump();

  return with_retry(retry_, [&] {
    HttpResponse resp = transport_->send(req);
    raise_for_status(resp, "translator");
    const Json j = parse_body(resp.body, "translator");
    try {
      return j.at(0).at("translations").at(0).at("text").get<std::string>();
    } catch (const Json::exception &e) {
      throw ProviderError(ProviderErrorKind::Protocol,
                          std::string("unexpected translator response: ") + e.what());
    }
  });
}

std::string HttpTranslator::translate_sentence(const std::string &text, Variant variant) {
  return translate(text, variant);
}

std::string HttpTranslator::translate_term(const std::string &term, Variant variant) {
  return translate(term, variant);
}

HttpDictionary::HttpDictionary(std::shared_ptr<HttpTransport> transport, TranslatorSettings settings,
                               RetryPolicy retry)
    : transport_(std::move(transport)), settings_(std::move(settings)), retry_(std::move(retry)) {}

std::vector<std::string> HttpDictionary::lookup_alternatives(const std::string &term) {
  HttpRequest req;
  req.method = "POST";
  // The dictionary endpoint only knows the generic "pt" target.
  req.url = trim_slash(settings_.endpoint) + "/dictionary/lookup?api-version=3.0&from=" +
            settings_.source_language + "&to=pt";
  req.headers = azure_headers(settings_);
  req.body = Json::array({{{"Text", term}}}).dump();

  return with_retry(retry_, [&] {
    HttpResponse resp = transport_->send(req);
    raise_for_status(resp, "dictionary lookup");
    const Json j = parse_body(resp.body, "dictionary lookup");
    std::vector<std::string> out;
    try {
      for (const Json &t : j.at(0).at("translations")) {
        out.push_back(t.at("displayTarget").get<std::string>());
      }
    } catch (const Json::exception &e) {
      throw ProviderError(ProviderErrorKind::Protocol,
                          std::string("unexpected dictionary response: ") + e.what());
    }
    return dedupe_case_insensitive(std::move(out));
  });
}

HttpAlignerClient::HttpAlignerClient(std::shared_ptr<HttpTransport> transport, std::string base_url,
                                     RetryPolicy retry)
    : transport_(std::move(transport)), base_url_(trim_slash(std::move(base_url))),
      retry_(std::move(retry)) {}

AlignmentMatrix parse_align_response(const std::string &body,
                                     const std::vector<std::string> &src_tokens,
                                     const std::vector<std::string> &tgt_tokens) {
  const Json j = parse_body(body, "aligner");
  std::vector<std::vector<double>> rows;
  try {
    rows = j.at("probs").get<std::vector<std::vector<double>>>();
  } catch (const Json::exception &e) {
    throw ProviderError(ProviderErrorKind::Protocol, std::string("unexpected aligner response: ") + e.what());
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  if (rows.size() != src_tokens.size()) {
    throw ProviderError(ProviderErrorKind::Protocol,
                        "aligner returned " + std::to_string(rows.size()) + "x" + std::to_string(cols) +
                            " matrix for " + std::to_string(src_tokens.size()) + " source and " +
                            std::to_string(tgt_tokens.size()) + " target tokens");
  }
  return make_matrix(src_tokens, tgt_tokens, rows);
}

AlignmentMatrix HttpAlignerClient::alignment_matrix(const std::vector<std::string> &src_tokens,
                                                    const std::vector<std::string> &tgt_tokens) {
  HttpRequest req;
  req.method = "POST";
  req.url = base_url_ + "/align";
  req.headers = {{"Content-Type", "application/json"}};
  req.body = Json{{"src_tokens", src_tokens}, {"tgt_tokens", tgt_tokens}}.dump();
  return with_retry(retry_, [&] {
    HttpResponse resp = transport_->send(req);
    raise_for_status(resp, "aligner");
    return parse_align_response(resp.body, src_tokens, tgt_tokens);
  });
}

std::string HttpAlignerClient::health() {
  HttpRequest req;
  req.method = "GET";
  req.url = base_url_ + "/health";
  HttpResponse resp = transport_->send(req);
  raise_for_status(resp, "aligner health");
  const Json j = parse_body(resp.body, "aligner health");
  return j.value("model_id", std::string());
}

LiveSettings live_settings_from_env(const std::filesystem::path &tables_dir) {
  LiveSettings s;
  s.translator.key = env_or("XLAP_TRANSLATOR_KEY", "");
  if (s.translator.key.empty()) {
    throw std::runtime_error("live providers need XLAP_TRANSLATOR_KEY to be set");
  }
  s.dictionary.key = env_or("XLAP_DICT_KEY", "");
  if (s.dictionary.key.empty()) {
    throw std::runtime_error("live providers need XLAP_DICT_KEY to be set");
  }
  s.translator.region = env_or("XLAP_TRANSLATOR_REGION", "");
  s.dictionary.region = s.translator.region;
  s.translator.endpoint = env_or("XLAP_TRANSLATOR_URL", s.translator.endpoint);
  s.dictionary.endpoint = s.translator.endpoint;
  s.aligner_url = env_or("XLAP_ALIGNER_URL", s.aligner_url);
  s.tables_dir = tables_dir;
  return s;
}

ProviderBundle make_live_bundle(const LiveSettings &settings, std::shared_ptr<ResponseCache> cache,
                                std::shared_ptr<HttpTransport> transport) {
  namespace fs = std::filesystem;
  if (!cache) cache = std::make_shared<ResponseCache>();
  if (!transport) transport = std::make_shared<HttplibTransport>(settings.max_in_flight);

  ProviderBundle bundle;
  bundle.transport = std::make_shared<InstrumentedTransport>(std::move(transport));
  bundle.cache = cache;
  bundle.translator = std::make_shared<CachingTranslator>(
      std::make_shared<HttpTranslator>(bundle.transport, settings.translator, settings.retry), cache);
  bundle.dictionary = std::make_shared<CachingDictionary>(
      std::make_shared<HttpDictionary>(bundle.transport, settings.dictionary, settings.retry), cache);
  bundle.aligner = std::make_shared<CachingAligner>(
      std::make_shared<HttpAlignerClient>(bundle.transport, settings.aligner_url, settings.retry), cache);

  const fs::path lemmas = settings.tables_dir / "lemmas.tsv";
  const fs::path thesaurus = settings.tables_dir / "thesaurus.tsv";
  bundle.lemmatizer = fs::exists(lemmas) ? std::make_shared<TableLemmatizer>(lemmas)
                                         : std::make_shared<TableLemmatizer>();
  bundle.thesaurus = fs::exists(thesaurus) ? std::make_shared<TableThesaurus>(thesaurus)
                                           : std::make_shared<TableThesaurus>();
  return bundle;
}

}  // namespace xlap
