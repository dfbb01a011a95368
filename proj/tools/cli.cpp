#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "xlap/eval.hpp"
#include "xlap/io.hpp"
#include "xlap/pipeline.hpp"
#include "xlap/run_config.hpp"

namespace xlap::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers the flags shared by every command. Values land in `flags` only
// when given, so config-file settings survive unless overridden.
void add_common(CLI::App &cmd, Flags &flags) {
  cmd.add_option_function<std::string>(
      "--config", [&](const std::string &v) { flags.config = v; }, "key = value config file");
  auto setting = [&](const char *flag, const char *key, const char *help) {
    cmd.add_option_function<std::string>(
        flag, [&flags, key](const std::string &v) { flags.overrides.emplace_back(key, v); }, help);
  };
  setting("--input", "input", "input JSONL");
  setting("--output", "output", "output JSONL");
  setting("--gold", "gold", "gold JSONL");
  setting("--variant", "variant", "european or brazilian");
  setting("--providers", "providers", "fixture or live");
  setting("--fixtures", "fixtures", "fixture table directory");
  setting("--cache-dir", "cache_dir", "persistent response cache directory");
  setting("--order", "order", "comma-separated strategy order");
  setting("--fuzzy-threshold", "fuzzy_threshold", "fuzzy match threshold");
  setting("--parallelism", "parallelism", "worker threads");
  setting("--csv", "csv", "also write the report as CSV");
  setting("--log", "log", "structured run log (JSONL)");
}

void require(const std::filesystem::path &p, const char *flag) {
  if (p.empty()) throw ConfigError(std::string(flag) + " is required");
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path.string() + "'");
  out << text;
}

class RunLog {
 public:
  explicit RunLog(const std::optional<std::filesystem::path> &path) {
    if (path) {
      out_.open(*path, std::ios::binary);
      if (!out_) throw LoadError("cannot write log '" + path->string() + "'");
    }
  }
  void event(const Json &j) {
    if (out_.is_open()) out_ << j.dump() << "\n";
  }

 private:
  std::ofstream out_;
};

Json sentence_event(const AlignedSentence &s, double elapsed_ms) {
  Json annotations = Json::array();
  for (const auto &a : s.annotations) {
    Json attempts = Json::array();
    for (const auto &c : a.candidates_tried) {
      attempts.push_back({{"method", to_string(c.method)}, {"matched", c.matched}, {"note", c.note}});
    }
    annotations.push_back({{"id", a.source.id}, {"method", to_string(a.method)}, {"attempts", attempts}});
  }
  Json j = {{"event", "sentence"},
            {"doc_id", s.sentence.doc_id},
            {"sent_id", s.sentence.sent_id},
            {"elapsed_ms", elapsed_ms},
            {"annotations", annotations}};
  j["failure"] = s.failure ? Json(*s.failure) : Json(nullptr);
  return j;
}

Json start_event(const std::string &command, const RunConfig &config) {
  return {{"event", "start"},
          {"command", command},
          {"providers", to_string(config.providers)},
          {"variant", to_string(config.variant())},
          {"order", format_order(config.pipeline.strategy_order)},
          {"parallelism", config.parallelism}};
}

int cmd_align(const RunConfig &config, std::ostream &out, std::ostream &err) {
  require(config.input, "--input");
  require(config.output, "--output");
  ProviderBundle providers = make_providers(config);
  RunLog log(config.log);
  log.event(start_event("align", config));
  const auto corpus = read_corpus(config.input);
  const AlignResult result = align_corpus(corpus, providers, config.pipeline, config.parallelism);
  write_aligned(config.output, result.sentences);
  for (std::size_t i = 0; i < result.sentences.size(); ++i) {
    log.event(sentence_event(result.sentences[i], result.elapsed_ms[i]));
  }
  log.event({{"event", "end"},
             {"sentences", result.sentences.size()},
             {"failures", result.failures.size()},
             {"cache_hits", providers.cache->hits()},
             {"cache_misses", providers.cache->misses()},
             {"network_calls", providers.transport->calls()}});
  out << render_stats_table(result.stats);
  if (config.csv) write_text(*config.csv, render_stats_csv(result.stats));
  for (const auto &f : result.failures) err << "failed: " << f << "\n";
  return result.failures.empty() ? kOk : kDataFailure;
}

int cmd_evaluate(const RunConfig &config, std::ostream &out) {
  require(config.input, "--input");
  if (!config.gold) throw ConfigError("--gold is required");
  const auto aligned = read_aligned(config.input);
  const auto gold = read_gold_records(*config.gold);
  const EvalReport report = evaluate(aligned, gold);
  out << render_eval_table(report) << "\n" << render_error_breakdown(report);
  if (config.csv) write_text(*config.csv, render_eval_csv(report));
  return kOk;
}

int cmd_search_order(const RunConfig &config, std::ostream &out) {
  require(config.input, "--input");
  if (!config.gold) throw ConfigError("--gold is required");
  ProviderBundle providers = make_providers(config);
  RunLog log(config.log);
  log.event(start_event("search-order", config));
  const auto corpus = read_corpus(config.input);
  const auto gold = read_gold_records(*config.gold);
  const OrderSearchResult result = search_order(corpus, gold, providers, config.pipeline, config.parallelism);
  for (const auto &r : result.ranked) {
    log.event({{"event", "order"}, {"order", format_order(r.order)}, {"exact", r.exact}, {"relaxed", r.relaxed}});
  }
  log.event({{"event", "end"}, {"best", format_order(result.best)}, {"network_calls", providers.transport->calls()}});
  out << render_order_table(result) << "best: " << format_order(result.best) << "\n";
  if (config.csv) {
    std::string csv = "rank,order,exact,relaxed\n";
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
      const auto &r = result.ranked[i];
      csv += std::to_string(i + 1) + ",\"" + format_order(r.order) + "\"," + std::to_string(r.exact) + "," +
             std::to_string(r.relaxed) + "\n";
    }
    write_text(*config.csv, csv);
  }
  return kOk;
}

int cmd_stats(const RunConfig &config, std::ostream &out) {
  require(config.input, "--input");
  const MethodStats stats = method_stats(read_aligned(config.input));
  out << render_stats_table(stats);
  if (config.csv) write_text(*config.csv, render_stats_csv(stats));
  return kOk;
}

int cmd_validate(const RunConfig &config, bool aligned, std::ostream &out) {
  require(config.input, "--input");
  std::size_t sentences = 0, annotations = 0;
  if (aligned) {
    const auto corpus = read_aligned(config.input);
    sentences = corpus.size();
    for (const auto &s : corpus) annotations += s.annotations.size();
    if (config.gold) read_gold(*config.gold, corpus);
  } else {
    const auto corpus = read_corpus(config.input);
    sentences = corpus.size();
    for (const auto &s : corpus) annotations += s.annotations.size();
  }
  out << "ok: " << sentences << " sentences, " << annotations << " annotations\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Cross-lingual annotation projection"};
  app.require_subcommand(1);
  Flags align_flags, eval_flags, search_flags, stats_flags, validate_flags;
  bool validate_aligned = false;

  auto *align = app.add_subcommand("align", "translate and align an annotated corpus");
  add_common(*align, align_flags);
  auto *evaluate_cmd = app.add_subcommand("evaluate", "score an aligned corpus against gold");
  add_common(*evaluate_cmd, eval_flags);
  auto *search = app.add_subcommand("search-order", "rank every permutation of the strategy order");
  add_common(*search, search_flags);
  auto *stats = app.add_subcommand("stats", "count alignments by method, kind and split");
  add_common(*stats, stats_flags);
  auto *validate_cmd = app.add_subcommand("validate", "check a corpus (or aligned corpus) file");
  add_common(*validate_cmd, validate_flags);
  validate_cmd->add_flag("--aligned", validate_aligned, "input is an aligned corpus");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  auto config_for = [](const Flags &f) {
    return load_run_config(f.config ? std::optional<std::filesystem::path>(*f.config) : std::nullopt, f.overrides);
  };
  try {
    if (*align) return cmd_align(config_for(align_flags), out, err);
    if (*evaluate_cmd) return cmd_evaluate(config_for(eval_flags), out);
    if (*search) return cmd_search_order(config_for(search_flags), out);
    if (*stats) return cmd_stats(config_for(stats_flags), out);
    return cmd_validate(config_for(validate_flags), validate_aligned, out);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DanglingReferenceError &e) {
    err << "dangling gold reference: " << e.what() << "\n";
    return kDataFailure;
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kDataFailure;
  } catch (const LoadError &e) {
    err << "error: " << e.what() << "\n";
    return kDataFailure;
  } catch (const ProviderError &e) {
    err << "provider error: " << e.what() << "\n";
    return kDataFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace xlap::cli
