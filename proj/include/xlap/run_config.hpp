#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xlap/providers.hpp"
#include "xlap/strategies.hpp"

namespace xlap {

enum class ProviderMode { Fixture, Live };

std::string_view to_string(ProviderMode mode);
ProviderMode parse_provider_mode(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> gold;
  ProviderMode providers = ProviderMode::Fixture;
  /// Fixture tables; in live mode only lemmas.tsv and thesaurus.tsv are read.
  std::filesystem::path fixtures = "fixtures";
  /// Empty means an in-memory cache.
  std::filesystem::path cache_dir;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> log;
  int parallelism = 1;
  int max_in_flight = 4;
  /// Carries the variant as well.
  PipelineConfig pipeline;

  Variant variant() const { return pipeline.variant; }
};

/// Reads `key = value` lines; '#' starts a comment. Throws ConfigError on
/// malformed lines or repeated keys.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path &path);

/// Keys: input, output, gold, variant, providers, fixtures, cache_dir, csv, log,
/// parallelism, max_in_flight, order, fuzzy_threshold, safeguard_slack,
/// safeguard_ratio, aligner_threshold, case_fold. Throws ConfigError.
void apply_setting(RunConfig &config, std::string_view key, std::string_view value);

/// Defaults, then the config file (if any), then `overrides` in order.
RunConfig load_run_config(const std::optional<std::filesystem::path> &file,
                          const std::vector<std::pair<std::string, std::string>> &overrides);

void validate(const RunConfig &config);

/// Builds the provider bundle for the configured mode. Live mode reads the
/// credential environment variables and throws ConfigError if one is missing.
ProviderBundle make_providers(const RunConfig &config);

}  // namespace xlap
