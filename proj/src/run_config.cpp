#include "xlap/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "xlap/fixture_providers.hpp"
#include "xlap/live_providers.hpp"

namespace xlap {

std::string_view to_string(ProviderMode mode) {
  return mode == ProviderMode::Live ? "live" : "fixture";
}

ProviderMode parse_provider_mode(std::string_view name) {
  if (name == "fixture") return ProviderMode::Fixture;
  if (name == "live") return ProviderMode::Live;
  throw ConfigError("unknown provider mode '" + std::string(name) + "' (expected fixture or live)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    }
    std::string key(trim(view.substr(0, eq)));
    std::string value(trim(view.substr(eq + 1)));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(n) + ": empty key");
    if (!seen.insert(key).second) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": '" + key + "' set twice");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void apply_setting(RunConfig &config, std::string_view key, std::string_view value) {
  try {
    if (key == "input") config.input = std::string(value);
    else if (key == "output") config.output = std::string(value);
    else if (key == "gold") config.gold = std::string(value);
    else if (key == "variant") config.pipeline.variant = parse_variant(value);
    else if (key == "providers") config.providers = parse_provider_mode(value);
    else if (key == "fixtures") config.fixtures = std::string(value);
    else if (key == "cache_dir") config.cache_dir = std::string(value);
    else if (key == "csv") config.csv = std::string(value);
    else if (key == "log") config.log = std::string(value);
    else if (key == "parallelism") config.parallelism = parse_number<int>(key, value);
    else if (key == "max_in_flight") config.max_in_flight = parse_number<int>(key, value);
    else if (key == "order") config.pipeline.strategy_order = parse_order(value);
    else if (key == "fuzzy_threshold") config.pipeline.fuzzy_threshold = parse_number<double>(key, value);
    else if (key == "safeguard_slack") config.pipeline.safeguard_slack_tokens = parse_number<std::size_t>(key, value);
    else if (key == "safeguard_ratio") config.pipeline.safeguard_ratio = parse_number<double>(key, value);
    else if (key == "aligner_threshold") config.pipeline.aligner_prob_threshold = parse_number<double>(key, value);
    else if (key == "case_fold") config.pipeline.case_fold_direct_match = parse_bool(key, value);
    else throw ConfigError("unknown setting '" + std::string(key) + "'");
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

RunConfig load_run_config(const std::optional<std::filesystem::path> &file,
                          const std::vector<std::pair<std::string, std::string>> &overrides) {
  RunConfig config;
  if (file) {
    for (const auto &[k, v] : read_config_file(*file)) apply_setting(config, k, v);
  }
  for (const auto &[k, v] : overrides) apply_setting(config, k, v);
  validate(config);
  return config;
}

void validate(const RunConfig &config) {
  if (config.parallelism < 1) throw ConfigError("parallelism must be a positive integer");
  if (config.max_in_flight < 1) throw ConfigError("max_in_flight must be a positive integer");
  try {
    config.pipeline.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

ProviderBundle make_providers(const RunConfig &config) {
  // Credentials are checked before anything touches the disk.
  std::optional<LiveSettings> settings;
  if (config.providers == ProviderMode::Live) {
    try {
      settings = live_settings_from_env(config.fixtures);
    } catch (const std::runtime_error &e) {
      throw ConfigError(e.what());
    }
    settings->max_in_flight = config.max_in_flight;
  }
  auto cache = config.cache_dir.empty() ? std::make_shared<ResponseCache>()
                                        : std::make_shared<ResponseCache>(config.cache_dir);
  if (!settings) return load_fixture_bundle(config.fixtures, cache);
  return make_live_bundle(*settings, cache);
}

}  // namespace xlap
