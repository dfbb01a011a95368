#include "xlap/io.hpp"

#include <map>

#include "json.hpp"

namespace xlap {

using Json = nlohmann::ordered_json;

ParseError::ParseError(const std::filesystem::path &path, std::size_t line, const std::string &what)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

const Json &field(const Json &obj, const char *name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const Json &obj, const char *name) {
  const Json &v = field(obj, name);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json &obj, const char *name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + name + "' must be a string or null");
  return it->get<std::string>();
}

std::size_t offset_field(const Json &obj, const char *name) {
  const Json &v = field(obj, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::invalid_argument(std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::optional<Span> optional_span(const Json &obj, const char *start, const char *end) {
  const bool has_start = obj.contains(start) && !obj.at(start).is_null();
  const bool has_end = obj.contains(end) && !obj.at(end).is_null();
  if (has_start != has_end) {
    throw std::invalid_argument(std::string("'") + start + "' and '" + end + "' must both be set or both null");
  }
  if (!has_start) return std::nullopt;
  return Span{offset_field(obj, start), offset_field(obj, end)};
}

Json source_fields(const SourceAnnotation &a) {
  Json j;
  j["id"] = a.id;
  j["kind"] = to_string(a.kind);
  j["label"] = a.label;
  j["start"] = a.span.start;
  j["end"] = a.span.end;
  j["surface"] = a.surface;
  return j;
}

SourceAnnotation source_from(const Json &j) {
  if (!j.is_object()) throw std::invalid_argument("annotation must be an object");
  SourceAnnotation a;
  a.id = string_field(j, "id");
  a.kind = parse_kind(string_field(j, "kind"));
  a.label = string_field(j, "label");
  a.span = Span{offset_field(j, "start"), offset_field(j, "end")};
  a.surface = string_field(j, "surface");
  return a;
}

Json sentence_header(const AnnotatedSentence &s) {
  Json j;
  j["doc_id"] = s.doc_id;
  j["sent_id"] = s.sent_id;
  j["split"] = to_string(s.split);
  j["text"] = s.text;
  return j;
}

AnnotatedSentence sentence_from(const Json &j) {
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
  AnnotatedSentence s;
  s.doc_id = string_field(j, "doc_id");
  s.sent_id = string_field(j, "sent_id");
  s.split = parse_split(string_field(j, "split"));
  s.text = string_field(j, "text");
  s.translation = optional_string(j, "translation");
  const Json &anns = field(j, "annotations");
  if (!anns.is_array()) throw std::invalid_argument("'annotations' must be an array");
  for (const Json &a : anns) s.annotations.push_back(source_from(a));
  return s;
}

Json parse_line(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const Json::parse_error &e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

bool blank(const std::string &line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string join(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &item : items) {
    if (!out.empty()) out += "; ";
    out += item;
  }
  return out;
}

std::ofstream open_for_write(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// Calls `fn(line_view, line_number)` for each non-blank line, wrapping codec
// errors into ParseError.
template <typename Fn>
void for_each_record(const std::filesystem::path &path, Fn &&fn) {
  std::ifstream in = open_for_read(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    try {
      fn(std::string_view(line), n);
    } catch (const std::invalid_argument &e) {
      throw ParseError(path, n, e.what());
    } catch (const Json::exception &e) {
      throw ParseError(path, n, e.what());
    }
  }
}

}  // namespace

std::string to_jsonl(const AnnotatedSentence &s) {
  Json j = sentence_header(s);
  Json anns = Json::array();
  for (const auto &a : s.annotations) anns.push_back(source_fields(a));
  j["annotations"] = std::move(anns);
  j["translation"] = s.translation ? Json(*s.translation) : Json(nullptr);
  return j.dump();
}

std::string to_jsonl(const AlignedSentence &s) {
  Json j = sentence_header(s.sentence);
  j["translation"] = s.sentence.translation ? Json(*s.sentence.translation) : Json(nullptr);
  Json anns = Json::array();
  for (const auto &a : s.annotations) {
    Json r = source_fields(a.source);
    r["term_translation"] = a.term_translation;
    r["method"] = to_string(a.method);
    r["aligned_start"] = a.aligned_span ? Json(a.aligned_span->start) : Json(nullptr);
    r["aligned_end"] = a.aligned_span ? Json(a.aligned_span->end) : Json(nullptr);
    r["aligned_surface"] = a.aligned_surface ? Json(*a.aligned_surface) : Json(nullptr);
    Json attempts = Json::array();
    for (const auto &o : a.candidates_tried) {
      Json t;
      t["method"] = to_string(o.method);
      t["matched"] = o.matched;
      t["start"] = o.span ? Json(o.span->start) : Json(nullptr);
      t["end"] = o.span ? Json(o.span->end) : Json(nullptr);
      t["note"] = o.note;
      attempts.push_back(std::move(t));
    }
    r["attempts"] = std::move(attempts);
    anns.push_back(std::move(r));
  }
  j["annotations"] = std::move(anns);
  j["failure"] = s.failure ? Json(*s.failure) : Json(nullptr);
  return j.dump();
}

std::string to_jsonl(const GoldAlignment &g) {
  Json j;
  j["doc_id"] = g.doc_id;
  j["sent_id"] = g.sent_id;
  j["annotation_id"] = g.annotation_id;
  j["gold_start"] = g.gold_span.start;
  j["gold_end"] = g.gold_span.end;
  j["gold_surface"] = g.gold_surface;
  return j.dump();
}

AnnotatedSentence corpus_record_from_jsonl(std::string_view line) {
  return sentence_from(parse_line(line));
}

AlignedSentence aligned_record_from_jsonl(std::string_view line) {
  const Json j = parse_line(line);
  AlignedSentence out;
  out.sentence = sentence_from(j);
  out.failure = optional_string(j, "failure");
  for (const Json &r : j.at("annotations")) {
    AlignedAnnotation a;
    a.source = source_from(r);
    a.term_translation = string_field(r, "term_translation");
    a.method = parse_method(string_field(r, "method"));
    a.aligned_span = optional_span(r, "aligned_start", "aligned_end");
    a.aligned_surface = optional_string(r, "aligned_surface");
    if (auto it = r.find("attempts"); it != r.end()) {
      for (const Json &t : *it) {
        StrategyOutcome o;
        o.method = parse_method(string_field(t, "method"));
        o.matched = field(t, "matched").get<bool>();
        o.span = optional_span(t, "start", "end");
        o.note = string_field(t, "note");
        a.candidates_tried.push_back(std::move(o));
      }
    }
    out.annotations.push_back(std::move(a));
  }
  return out;
}

GoldAlignment gold_record_from_jsonl(std::string_view line) {
  const Json j = parse_line(line);
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
  GoldAlignment g;
  g.doc_id = string_field(j, "doc_id");
  g.sent_id = string_field(j, "sent_id");
  g.annotation_id = string_field(j, "annotation_id");
  g.gold_span = Span{offset_field(j, "gold_start"), offset_field(j, "gold_end")};
  g.gold_surface = string_field(j, "gold_surface");
  return g;
}

CorpusReader::CorpusReader(const std::filesystem::path &path)
    : path_(path), in_(open_for_read(path)) {}

std::optional<AnnotatedSentence> CorpusReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    AnnotatedSentence s;
    try {
      s = corpus_record_from_jsonl(line);
    } catch (const std::invalid_argument &e) {
      throw ParseError(path_, line_, e.what());
    } catch (const Json::exception &e) {
      throw ParseError(path_, line_, e.what());
    }
    if (auto violations = validate_sentence(s); !violations.empty()) {
      throw LoadError(path_.string() + ":" + std::to_string(line_) + ": " + join(violations));
    }
    if (!seen_.emplace(s.doc_id, s.sent_id).second) {
      throw LoadError(path_.string() + ":" + std::to_string(line_) + ": duplicate sentence " +
                      s.doc_id + "/" + s.sent_id);
    }
    return s;
  }
  return std::nullopt;
}

std::vector<AnnotatedSentence> read_corpus(const std::filesystem::path &path) {
  CorpusReader reader(path);
  std::vector<AnnotatedSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

void write_corpus(const std::filesystem::path &path, std::span<const AnnotatedSentence> corpus) {
  std::ofstream out = open_for_write(path);
  for (const auto &s : corpus) out << to_jsonl(s) << '\n';
  finish(out, path);
}

std::vector<AlignedSentence> read_aligned(const std::filesystem::path &path) {
  std::vector<AlignedSentence> out;
  for_each_record(path, [&](std::string_view line, std::size_t n) {
    AlignedSentence s = aligned_record_from_jsonl(line);
    if (auto violations = validate_aligned(s); !violations.empty()) {
      throw LoadError(path.string() + ":" + std::to_string(n) + ": " + join(violations));
    }
    out.push_back(std::move(s));
  });
  return out;
}

void write_aligned(const std::filesystem::path &path, std::span<const AlignedSentence> corpus) {
  for (const auto &s : corpus) {
    if (auto violations = validate_aligned(s); !violations.empty()) {
      throw LoadError("refusing to write invalid aligned record: " + join(violations));
    }
  }
  std::ofstream out = open_for_write(path);
  for (const auto &s : corpus) out << to_jsonl(s) << '\n';
  finish(out, path);
}

std::vector<GoldAlignment> read_gold_records(const std::filesystem::path &path) {
  std::vector<GoldAlignment> out;
  for_each_record(path, [&](std::string_view line, std::size_t) {
    out.push_back(gold_record_from_jsonl(line));
  });
  return out;
}

void resolve_gold(std::span<const GoldAlignment> gold, std::span<const AlignedSentence> aligned) {
  std::map<std::pair<std::string, std::string>, const AlignedSentence *> by_key;
  for (const auto &s : aligned) by_key[{s.sentence.doc_id, s.sentence.sent_id}] = &s;

  for (const auto &g : gold) {
    const std::string ref = g.doc_id + "/" + g.sent_id + " annotation '" + g.annotation_id + "'";
    auto it = by_key.find({g.doc_id, g.sent_id});
    if (it == by_key.end()) {
      throw DanglingReferenceError("gold record references unknown sentence " + g.doc_id + "/" +
                                   g.sent_id + " (annotation '" + g.annotation_id + "')");
    }
    const AlignedSentence &s = *it->second;
    bool found = false;
    for (const auto &a : s.annotations) found = found || a.source.id == g.annotation_id;
    if (!found) throw DanglingReferenceError("gold record references unknown " + ref);

    const std::string translation = s.sentence.translation.value_or("");
    std::string at_span;
    try {
      at_span = slice(translation, g.gold_span);
    } catch (const BoundaryError &e) {
      throw LoadError("gold " + ref + ": " + e.what());
    }
    if (at_span != g.gold_surface) {
      throw LoadError("gold " + ref + ": gold_surface '" + g.gold_surface +
                      "' does not match translation at span ('" + at_span + "')");
    }
  }
}

std::vector<GoldAlignment> read_gold(const std::filesystem::path &path,
                                     std::span<const AlignedSentence> aligned) {
  auto gold = read_gold_records(path);
  resolve_gold(gold, aligned);
  return gold;
}

void write_gold(const std::filesystem::path &path, std::span<const GoldAlignment> gold) {
  std::ofstream out = open_for_write(path);
  for (const auto &g : gold) out << to_jsonl(g) << '\n';
  finish(out, path);
}

}  // namespace xlap
