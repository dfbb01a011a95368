#include <algorithm>
#include <cstdio>
#include <sstream>

#include "xlap/eval.hpp"

namespace xlap {

namespace {

std::string thousands(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::string pad_left(const std::string &s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string &s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

constexpr std::size_t kNameWidth = 10;
constexpr std::size_t kCellWidth = 9;

std::string centered(const std::string &s, std::size_t width) {
  if (s.size() >= width) return s;
  const std::size_t left = (width - s.size()) / 2;
  return std::string(left, ' ') + s + std::string(width - s.size() - left, ' ');
}

// Methods that get a row: the strategies, Manual always, Unaligned when used.
template <typename HasRows>
std::vector<AlignmentMethod> row_methods(HasRows &&used) {
  std::vector<AlignmentMethod> out(kStrategyMethods.begin(), kStrategyMethods.end());
  out.push_back(AlignmentMethod::Manual);
  if (used(AlignmentMethod::Unaligned)) out.push_back(AlignmentMethod::Unaligned);
  return out;
}

std::vector<Split> stats_splits(const MethodStats &stats) {
  std::vector<Split> out = {Split::Train, Split::Dev, Split::Test};
  if (stats.total(AnnotationKind::Trigger, Split::Unsplit) + stats.total(AnnotationKind::Argument, Split::Unsplit) > 0) {
    out.push_back(Split::Unsplit);
  }
  return out;
}

std::string split_header(Split s) {
  std::string name(to_string(s));
  name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

std::string rstrip_lines(const std::string &text) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::size_t end = nl;
    while (end > start && text[end - 1] == ' ') --end;
    out.append(text, start, end - start);
    if (nl < text.size()) out += '\n';
    start = nl + 1;
  }
  return out;
}

const std::array<AnnotationKind, 2> kKinds = {AnnotationKind::Trigger, AnnotationKind::Argument};

}  // namespace

std::string render_stats_table(const MethodStats &stats) {
  const auto splits = stats_splits(stats);
  const auto methods =
      row_methods([&](AlignmentMethod m) { return stats.count(m, AnnotationKind::Trigger) + stats.count(m, AnnotationKind::Argument) > 0; });
  // Widen cells when the largest count would not leave a separating space.
  const std::size_t width = std::max(
      kCellWidth,
      thousands(std::max(stats.total(AnnotationKind::Trigger), stats.total(AnnotationKind::Argument))).size() + 1);
  const std::size_t group = (splits.size() + 1) * width;

  std::ostringstream out;
  out << pad_right("Method", kNameWidth);
  for (AnnotationKind k : kKinds) {
    std::string name(to_string(k));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    out << " |" << centered(name, group);
  }
  out << "\n" << std::string(kNameWidth, ' ');
  for (std::size_t g = 0; g < 2; ++g) {
    out << " |";
    for (Split s : splits) out << pad_left(split_header(s), width);
    out << pad_left("Total", width);
  }
  out << "\n" << std::string(kNameWidth, '-');
  for (std::size_t g = 0; g < 2; ++g) out << "-+" << std::string(group, '-');
  out << "\n";

  auto row = [&](const std::string &name, auto &&value, auto &&applicable) {
    out << pad_right(name, kNameWidth);
    for (AnnotationKind k : kKinds) {
      out << " |";
      for (Split s : splits) out << pad_left(applicable(k) ? thousands(value(k, s)) : "-", width);
      std::size_t total = 0;
      for (Split s : kAllSplits) total += value(k, s);
      out << pad_left(applicable(k) ? thousands(total) : "-", width);
    }
    out << "\n";
  };
  for (AlignmentMethod m : methods) {
    row(std::string(to_string(m)), [&](AnnotationKind k, Split s) { return stats.count(m, k, s); },
        [&](AnnotationKind k) { return applies_to(m, k); });
  }
  row("Total", [&](AnnotationKind k, Split s) { return stats.total(k, s); },
      [](AnnotationKind) { return true; });
  return rstrip_lines(out.str());
}

std::string render_stats_csv(const MethodStats &stats) {
  std::ostringstream out;
  out << "method,kind,split,count\n";
  for (AlignmentMethod m : kAllMethods) {
    for (AnnotationKind k : kKinds) {
      for (Split s : kAllSplits) {
        out << to_string(m) << ',' << to_string(k) << ',' << to_string(s) << ',' << stats.count(m, k, s) << "\n";
      }
    }
  }
  return out.str();
}

std::string render_eval_table(const EvalReport &report) {
  const auto methods = row_methods([&](AlignmentMethod m) { return report.method_cell(m).support > 0; });
  const std::size_t group = 2 * kCellWidth;

  std::ostringstream out;
  out << pad_right("Method", kNameWidth);
  for (const char *name : {"Trigger", "Argument", "All"}) out << " |" << centered(name, group);
  out << "\n" << std::string(kNameWidth, ' ');
  for (int g = 0; g < 3; ++g) out << " |" << pad_left("Relaxed", kCellWidth) << pad_left("Exact", kCellWidth);
  out << "\n" << std::string(kNameWidth, '-');
  for (int g = 0; g < 3; ++g) out << "-+" << std::string(group, '-');
  out << "\n";

  auto cells = [&](const ScoreCell &c) {
    out << " |";
    if (c.support == 0) {
      out << pad_left("-", kCellWidth) << pad_left("-", kCellWidth);
    } else {
      out << pad_left(percent(c.relaxed()), kCellWidth) << pad_left(percent(c.exact()), kCellWidth);
    }
  };
  for (AlignmentMethod m : methods) {
    out << pad_right(std::string(to_string(m)), kNameWidth);
    for (AnnotationKind k : kKinds) cells(report.cell(m, k));
    cells(report.method_cell(m));
    out << "\n";
  }
  out << pad_right("Pipeline", kNameWidth);
  for (AnnotationKind k : kKinds) cells(report.cell(k));
  cells(report.overall);
  out << "\n";
  return rstrip_lines(out.str());
}

std::string render_eval_csv(const EvalReport &report) {
  std::ostringstream out;
  out << "method,kind,support,relaxed,exact\n";
  auto line = [&](std::string_view method, std::string_view kind, const ScoreCell &c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", c.relaxed(), c.exact());
    out << method << ',' << kind << ',' << c.support << ',' << buf << "\n";
  };
  for (AlignmentMethod m : kAllMethods) {
    for (AnnotationKind k : kKinds) line(to_string(m), to_string(k), report.cell(m, k));
    line(to_string(m), "all", report.method_cell(m));
  }
  for (AnnotationKind k : kKinds) line("pipeline", to_string(k), report.cell(k));
  line("pipeline", "all", report.overall);
  return out.str();
}

std::string render_error_breakdown(const EvalReport &report) {
  std::ostringstream out;
  out << pad_right("Error", 22) << pad_left("Trigger", kCellWidth) << pad_left("Argument", kCellWidth)
      << pad_left("All", kCellWidth) << "\n";
  for (ErrorClass e : kAllErrorClasses) {
    out << pad_right(std::string(to_string(e)), 22)
        << pad_left(thousands(report.cell(AnnotationKind::Trigger).error_count(e)), kCellWidth)
        << pad_left(thousands(report.cell(AnnotationKind::Argument).error_count(e)), kCellWidth)
        << pad_left(thousands(report.overall.error_count(e)), kCellWidth) << "\n";
  }
  return out.str();
}

std::string render_order_table(const OrderSearchResult &result) {
  std::ostringstream out;
  out << pad_left("Rank", 5) << pad_left("Exact", kCellWidth) << pad_left("Relaxed", kCellWidth) << "  Order\n";
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const auto &r = result.ranked[i];
    out << pad_left(std::to_string(i + 1), 5) << pad_left(percent(r.exact), kCellWidth)
        << pad_left(percent(r.relaxed), kCellWidth) << "  " << format_order(r.order) << "\n";
  }
  return out.str();
}

}  // namespace xlap
