#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "xlap/providers.hpp"

// Offline providers backed by plain-text tables. Lookups never touch the
// network and a missing entry is a ProviderError(Miss), never a passthrough.
//
// Table files are UTF-8, tab-separated, one entry per line; blank lines and
// lines starting with '#' are ignored. List cells separate items with '|'.
//
//   translations.tsv   kind(sentence|term) <TAB> variant <TAB> source <TAB> target
//   dictionary.tsv     source term <TAB> alt1|alt2|...
//   lemmas.tsv         language <TAB> form <TAB> lemma
//   thesaurus.tsv      language <TAB> headword <TAB> syn1|syn2|...
//   matrices.jsonl     {"src_tokens":[...],"tgt_tokens":[...],"probs":[[...],...]}

namespace xlap {

/// Splits one table line into tab-separated cells.
std::vector<std::string> split_cells(const std::string &line);

/// Reads every non-comment line of a table file, with its line number.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_table(
    const std::filesystem::path &path, std::size_t cells);

class FixtureTranslator : public Translator {
 public:
  FixtureTranslator() = default;
  explicit FixtureTranslator(const std::filesystem::path &table);

  void add_sentence(Variant variant, std::string source, std::string target);
  void add_term(Variant variant, std::string source, std::string target);

  std::string translate_sentence(const std::string &text, Variant variant) override;
  std::string translate_term(const std::string &term, Variant variant) override;

  std::size_t sentence_calls() const { return sentence_calls_.load(); }
  std::size_t term_calls() const { return term_calls_.load(); }

 private:
  std::map<std::tuple<bool, Variant, std::string>, std::string> table_;
  std::atomic<std::size_t> sentence_calls_{0};
  std::atomic<std::size_t> term_calls_{0};
};

/// Keys are matched case-insensitively.
class FixtureDictionary : public DictionaryLookup {
 public:
  FixtureDictionary() = default;
  explicit FixtureDictionary(const std::filesystem::path &table);

  void add(const std::string &term, std::vector<std::string> alternatives);
  std::vector<std::string> lookup_alternatives(const std::string &term) override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

/// Form-to-lemma table; unknown forms lemmatize to their lowercased surface.
class TableLemmatizer : public Lemmatizer {
 public:
  TableLemmatizer() = default;
  explicit TableLemmatizer(const std::filesystem::path &table);

  void add(const std::string &language, const std::string &form, std::string lemma);
  std::vector<std::string> lemmatize(const std::vector<std::string> &tokens,
                                     std::string_view language) const override;

 private:
  std::map<std::pair<std::string, std::string>, std::string> table_;
};

class TableThesaurus : public Thesaurus {
 public:
  TableThesaurus() = default;
  explicit TableThesaurus(const std::filesystem::path &table);

  void add(const std::string &language, const std::string &headword,
           std::vector<std::string> synonyms);
  std::vector<std::string> synonyms(const std::string &term,
                                    std::string_view language) const override;

 private:
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> table_;
};

/// Matrices keyed by their exact token lists.
class FixtureAligner : public EmbedAlignerClient {
 public:
  FixtureAligner() = default;
  explicit FixtureAligner(const std::filesystem::path &bundle);

  void add(AlignmentMatrix matrix);
  AlignmentMatrix alignment_matrix(const std::vector<std::string> &src_tokens,
                                   const std::vector<std::string> &tgt_tokens) override;

 private:
  std::map<std::pair<std::vector<std::string>, std::vector<std::string>>, AlignmentMatrix> table_;
};

/// Aligner that delegates to a function; handy for generated matrices.
class CallbackAligner : public EmbedAlignerClient {
 public:
  using Fn = std::function<AlignmentMatrix(const std::vector<std::string> &,
                                           const std::vector<std::string> &)>;
  explicit CallbackAligner(Fn fn) : fn_(std::move(fn)) {}
  AlignmentMatrix alignment_matrix(const std::vector<std::string> &src_tokens,
                                   const std::vector<std::string> &tgt_tokens) override {
    return fn_(src_tokens, tgt_tokens);
  }

 private:
  Fn fn_;
};

/// Loads every table from `dir`. Missing files yield empty tables. Translator,
/// dictionary and aligner are wrapped in the cache; the transport has no
/// network behind it, so any attempted call is counted and fails.
ProviderBundle load_fixture_bundle(const std::filesystem::path &dir,
                                   std::shared_ptr<ResponseCache> cache = nullptr);

}  // namespace xlap
