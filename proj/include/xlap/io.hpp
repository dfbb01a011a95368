#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xlap/corpus.hpp"

namespace xlap {

/// Malformed record. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path &path, std::size_t line, const std::string &what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed record that breaks a data invariant.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gold record pointing at a sentence or annotation that does not exist.
class DanglingReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GoldAlignment {
  std::string doc_id;
  std::string sent_id;
  std::string annotation_id;
  Span gold_span;
  std::string gold_surface;
  friend bool operator==(const GoldAlignment &, const GoldAlignment &) = default;
};

// Single-record codecs. Lines never end in a newline.
std::string to_jsonl(const AnnotatedSentence &sentence);
std::string to_jsonl(const AlignedSentence &sentence);
std::string to_jsonl(const GoldAlignment &gold);
AnnotatedSentence corpus_record_from_jsonl(std::string_view line);
AlignedSentence aligned_record_from_jsonl(std::string_view line);
GoldAlignment gold_record_from_jsonl(std::string_view line);

/// Streaming reader over a corpus file: holds one record in memory at a time
/// (plus the set of seen sentence keys for the uniqueness check).
class CorpusReader {
 public:
  explicit CorpusReader(const std::filesystem::path &path);
  /// Next validated sentence, or nullopt at end of file.
  std::optional<AnnotatedSentence> next();
  std::size_t line() const { return line_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::set<std::pair<std::string, std::string>> seen_;
};

std::vector<AnnotatedSentence> read_corpus(const std::filesystem::path &path);
void write_corpus(const std::filesystem::path &path, std::span<const AnnotatedSentence> corpus);

std::vector<AlignedSentence> read_aligned(const std::filesystem::path &path);
void write_aligned(const std::filesystem::path &path, std::span<const AlignedSentence> corpus);

/// Parses gold records without resolving them.
std::vector<GoldAlignment> read_gold_records(const std::filesystem::path &path);

/// Parses gold records and resolves each against `aligned` by
/// (doc_id, sent_id, annotation_id), checking gold_surface against the
/// translation. Throws DanglingReferenceError or LoadError.
std::vector<GoldAlignment> read_gold(const std::filesystem::path &path,
                                     std::span<const AlignedSentence> aligned);

/// Resolution check used by read_gold; exposed for in-memory gold sets.
void resolve_gold(std::span<const GoldAlignment> gold, std::span<const AlignedSentence> aligned);

void write_gold(const std::filesystem::path &path, std::span<const GoldAlignment> gold);

}  // namespace xlap
