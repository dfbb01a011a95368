#include "xlap/fixture_providers.hpp"

#include <fstream>

#include "json.hpp"
#include "xlap/text.hpp"

namespace xlap {

namespace {

std::vector<std::string> split_list(const std::string &cell) {
  std::vector<std::string> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = cell.find('|', start);
    std::string item = cell.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    if (!item.empty()) out.push_back(std::move(item));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> split_cells(const std::string &line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
  return cells;
}

std::vector<std::pair<std::size_t, std::vector<std::string>>> read_table(
    const std::filesystem::path &path, std::size_t cells) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table '" + path.string() + "'");
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    auto row = split_cells(line);
    if (row.size() != cells) {
      throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": expected " +
                               std::to_string(cells) + " tab-separated cells, found " +
                               std::to_string(row.size()));
    }
    rows.emplace_back(n, std::move(row));
  }
  return rows;
}

FixtureTranslator::FixtureTranslator(const std::filesystem::path &table) {
  for (auto &[n, row] : read_table(table, 4)) {
    const Variant v = parse_variant(row[1]);
    if (row[0] == "sentence") {
      add_sentence(v, row[2], row[3]);
    } else if (row[0] == "term") {
      add_term(v, row[2], row[3]);
    } else {
      throw std::runtime_error(table.string() + ":" + std::to_string(n) + ": kind must be sentence or term");
    }
  }
}

void FixtureTranslator::add_sentence(Variant variant, std::string source, std::string target) {
  table_[{true, variant, std::move(source)}] = std::move(target);
}

void FixtureTranslator::add_term(Variant variant, std::string source, std::string target) {
  table_[{false, variant, std::move(source)}] = std::move(target);
}

std::string FixtureTranslator::translate_sentence(const std::string &text, Variant variant) {
  ++sentence_calls_;
  auto it = table_.find({true, variant, text});
  if (it == table_.end()) {
    throw ProviderError(ProviderErrorKind::Miss, "no fixture sentence translation for '" + text + "'");
  }
  return it->second;
}

std::string FixtureTranslator::translate_term(const std::string &term, Variant variant) {
  ++term_calls_;
  auto it = table_.find({false, variant, term});
  if (it == table_.end()) {
    throw ProviderError(ProviderErrorKind::Miss, "no fixture term translation for '" + term + "'");
  }
  return it->second;
}

FixtureDictionary::FixtureDictionary(const std::filesystem::path &table) {
  for (auto &[n, row] : read_table(table, 2)) add(row[0], split_list(row[1]));
}

void FixtureDictionary::add(const std::string &term, std::vector<std::string> alternatives) {
  table_[fold_case(term)] = std::move(alternatives);
}

std::vector<std::string> FixtureDictionary::lookup_alternatives(const std::string &term) {
  auto it = table_.find(fold_case(term));
  if (it == table_.end()) return {};
  return dedupe_case_insensitive(it->second);
}

TableLemmatizer::TableLemmatizer(const std::filesystem::path &table) {
  for (auto &[n, row] : read_table(table, 3)) add(row[0], row[1], row[2]);
}

void TableLemmatizer::add(const std::string &language, const std::string &form, std::string lemma) {
  table_[{language, fold_case(form)}] = std::move(lemma);
}

std::vector<std::string> TableLemmatizer::lemmatize(const std::vector<std::string> &tokens,
                                                    std::string_view language) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  const std::string lang(language);
  for (const auto &token : tokens) {
    std::string folded = fold_case(token);
    auto it = table_.find({lang, folded});
    out.push_back(it == table_.end() ? std::move(folded) : it->second);
  }
  return out;
}

TableThesaurus::TableThesaurus(const std::filesystem::path &table) {
  for (auto &[n, row] : read_table(table, 3)) add(row[0], row[1], split_list(row[2]));
}

void TableThesaurus::add(const std::string &language, const std::string &headword,
                         std::vector<std::string> synonyms) {
  auto &entry = table_[{language, fold_case(headword)}];
  entry.insert(entry.end(), synonyms.begin(), synonyms.end());
}

std::vector<std::string> TableThesaurus::synonyms(const std::string &term,
                                                  std::string_view language) const {
  const std::string folded = fold_case(term);
  auto it = table_.find({std::string(language), folded});
  if (it == table_.end()) return {};
  std::vector<std::string> out;
  for (const auto &s : dedupe_case_insensitive(it->second)) {
    if (fold_case(s) != folded) out.push_back(s);
  }
  return out;
}

FixtureAligner::FixtureAligner(const std::filesystem::path &bundle) {
  std::ifstream in(bundle, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open matrix bundle '" + bundle.string() + "'");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    try {
      const auto j = nlohmann::json::parse(line);
      add(make_matrix(j.at("src_tokens").get<std::vector<std::string>>(),
                      j.at("tgt_tokens").get<std::vector<std::string>>(),
                      j.at("probs").get<std::vector<std::vector<double>>>()));
    } catch (const std::exception &e) {
      throw std::runtime_error(bundle.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void FixtureAligner::add(AlignmentMatrix matrix) {
  matrix.validate();
  auto key = std::make_pair(matrix.src_tokens, matrix.tgt_tokens);
  table_.insert_or_assign(std::move(key), std::move(matrix));
}

AlignmentMatrix FixtureAligner::alignment_matrix(const std::vector<std::string> &src_tokens,
                                                 const std::vector<std::string> &tgt_tokens) {
  auto it = table_.find({src_tokens, tgt_tokens});
  if (it == table_.end()) {
    std::string joined;
    for (const auto &t : src_tokens) joined += (joined.empty() ? "" : " ") + t;
    throw ProviderError(ProviderErrorKind::Miss, "no fixture alignment matrix for '" + joined + "'");
  }
  return it->second;
}

ProviderBundle load_fixture_bundle(const std::filesystem::path &dir,
                                   std::shared_ptr<ResponseCache> cache) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("fixture directory '" + dir.string() + "' not found");
  if (!cache) cache = std::make_shared<ResponseCache>();

  auto translator = fs::exists(dir / "translations.tsv")
                        ? std::make_shared<FixtureTranslator>(dir / "translations.tsv")
                        : std::make_shared<FixtureTranslator>();
  auto dictionary = fs::exists(dir / "dictionary.tsv")
                        ? std::make_shared<FixtureDictionary>(dir / "dictionary.tsv")
                        : std::make_shared<FixtureDictionary>();
  auto lemmatizer = fs::exists(dir / "lemmas.tsv")
                        ? std::make_shared<TableLemmatizer>(dir / "lemmas.tsv")
                        : std::make_shared<TableLemmatizer>();
  auto thesaurus = fs::exists(dir / "thesaurus.tsv")
                       ? std::make_shared<TableThesaurus>(dir / "thesaurus.tsv")
                       : std::make_shared<TableThesaurus>();
  auto aligner = fs::exists(dir / "matrices.jsonl")
                     ? std::make_shared<FixtureAligner>(dir / "matrices.jsonl")
                     : std::make_shared<FixtureAligner>();

  ProviderBundle bundle;
  bundle.translator = std::make_shared<CachingTranslator>(translator, cache);
  bundle.dictionary = std::make_shared<CachingDictionary>(dictionary, cache);
  bundle.lemmatizer = lemmatizer;
  bundle.thesaurus = thesaurus;
  bundle.aligner = std::make_shared<CachingAligner>(aligner, cache);
  bundle.cache = cache;
  bundle.transport = std::make_shared<InstrumentedTransport>();
  return bundle;
}

}  // namespace xlap
