#include <atomic>
#include <fstream>
#include <map>
#include <sstream>

#include "iwf/io.hpp"
#include "json.hpp"

namespace iwf::io {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string join_lines(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) out += (out.empty() ? "" : "\n") + e;
  return out;
}

/// Splits into (line number, text) pairs, skipping blank lines. Drops a
/// leading BOM and trailing CRs.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view content) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t no = 0;
  while (!content.empty()) {
    ++no;
    const auto nl = content.find('\n');
    auto line = content.substr(0, nl);
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.emplace_back(no, line);
  }
  return out;
}

std::string at_line(std::size_t no) { return "line " + std::to_string(no) + ": "; }

std::optional<json> parse_object(std::size_t no, std::string_view line, std::vector<std::string>& errors) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    errors.push_back(at_line(no) + "malformed JSON (" + e.what() + ")");
    return std::nullopt;
  }
  if (!doc.is_object()) {
    errors.push_back(at_line(no) + "expected a JSON object");
    return std::nullopt;
  }
  return doc;
}

/// Reads an optional string field; records a type error.
bool string_field(const json& doc, const char* key, std::optional<std::string>& out, std::size_t no,
                  std::vector<std::string>& errors) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return true;
  if (!it->is_string()) {
    errors.push_back(at_line(no) + "\"" + key + "\" must be a string");
    return false;
  }
  out = it->get<std::string>();
  return true;
}

/// Records duplicates as "line N: duplicate id "x" (also on line M)".
class IdTracker {
 public:
  bool add(const std::string& id, std::size_t no, std::vector<std::string>& errors) {
    const auto [it, fresh] = seen_.emplace(id, no);
    if (fresh) return true;
    errors.push_back(at_line(no) + "duplicate id \"" + id + "\" (also on line " + std::to_string(it->second) + ")");
    return false;
  }

 private:
  std::map<std::string, std::size_t> seen_;
};

std::atomic<std::uint64_t> g_write_counter{0};

std::string tsv_cell(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (const unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  out.append(width > display_width(s) ? width - display_width(s) : 0, ' ');
  return out;
}

ordered_json report_json(const FlawReport& r) {
  ordered_json flaws = ordered_json::array();
  for (const auto c : r.flaws.flagged()) {
    bool any = false;
    for (const auto& e : r.evidence) {
      if (e.criterion != c) continue;
      any = true;
      ordered_json spans = ordered_json::array();
      for (const auto& s : e.spans) {
        ordered_json span;
        span["option"] = s.option ? ordered_json(*s.option) : ordered_json(nullptr);
        span["begin"] = s.begin;
        span["end"] = s.end;
        spans.push_back(std::move(span));
      }
      flaws.push_back({{"criterion", name_of(c)}, {"message", e.message}, {"spans", std::move(spans)}});
    }
    if (!any) flaws.push_back({{"criterion", name_of(c)}, {"message", ""}, {"spans", ordered_json::array()}});
  }
  ordered_json out;
  out["id"] = r.question_id;
  out["flaws"] = std::move(flaws);
  out["flaw_count"] = r.flaw_count;
  out["verdict"] = to_string(r.verdict);
  return out;
}

}  // namespace

LoadError::LoadError(std::vector<std::string> errors) : InputError(join_lines(errors)), errors_(std::move(errors)) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("error reading " + path.string());
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto temp = path;
  temp += ".tmp." + std::to_string(g_write_counter++);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(temp);
      throw FileError("error writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw FileError("cannot replace " + path.string());
  }
}

std::vector<Question> parse_corpus(std::string_view content) {
  std::vector<Question> out;
  std::vector<std::string> errors;
  IdTracker ids;
  for (const auto& [no, line] : lines_of(content)) {
    const auto doc = parse_object(no, line, errors);
    if (!doc) continue;
    const std::size_t before = errors.size();
    RawQuestion raw;

    std::optional<std::string> id, stem;
    string_field(*doc, "id", id, no, errors);
    string_field(*doc, "stem", stem, no, errors);
    string_field(*doc, "domain", raw.domain, no, errors);
    if (!doc->contains("id")) errors.push_back(at_line(no) + "missing \"id\"");
    if (!doc->contains("stem")) errors.push_back(at_line(no) + "missing \"stem\"");
    if (id && id->empty()) errors.push_back(at_line(no) + "empty id");

    const auto opts = doc->find("options");
    if (opts == doc->end()) {
      errors.push_back(at_line(no) + "missing \"options\"");
    } else if (!opts->is_array()) {
      errors.push_back(at_line(no) + "\"options\" must be an array of strings");
    } else {
      for (const auto& o : *opts) {
        if (!o.is_string()) {
          errors.push_back(at_line(no) + "\"options\" must be an array of strings");
          break;
        }
        raw.options.push_back(o.get<std::string>());
      }
    }
    const auto ans = doc->find("answer_index");
    if (ans == doc->end()) {
      errors.push_back(at_line(no) + "missing \"answer_index\"");
    } else if (!ans->is_number_integer()) {
      errors.push_back(at_line(no) + "\"answer_index\" must be an integer");
    } else {
      raw.answer_index = ans->get<std::int64_t>();
    }
    if (errors.size() != before) continue;

    raw.id = *id;
    raw.stem = *stem;
    auto v = validate_question(std::move(raw));
    if (auto* problems = std::get_if<std::vector<std::string>>(&v)) {
      for (const auto& p : *problems) errors.push_back(at_line(no) + "question \"" + *id + "\": " + p);
      continue;
    }
    if (ids.add(*id, no, errors)) out.push_back(std::get<Question>(std::move(v)));
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return out;
}

std::vector<Question> load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

LabelMatrix parse_labels(std::string_view content, LabelSource source) {
  LabelMatrix m(source);
  std::vector<std::string> errors;
  IdTracker ids;
  for (const auto& [no, line] : lines_of(content)) {
    const auto doc = parse_object(no, line, errors);
    if (!doc) continue;
    const std::size_t before = errors.size();
    LabelRow row;
    std::optional<std::string> id;
    string_field(*doc, "id", id, no, errors);
    string_field(*doc, "domain", row.domain, no, errors);
    if (!id || id->empty()) errors.push_back(at_line(no) + "missing \"id\"");

    if (const auto flaws = doc->find("flaws"); flaws != doc->end() && !flaws->is_null()) {
      if (!flaws->is_array()) {
        errors.push_back(at_line(no) + "\"flaws\" must be an array of criterion names");
      } else {
        for (const auto& f : *flaws) {
          if (!f.is_string()) {
            errors.push_back(at_line(no) + "\"flaws\" must be an array of criterion names");
            break;
          }
          const auto name = f.get<std::string>();
          if (const auto c = criterion_from_name(name)) {
            row.flaws.set(*c);
          } else {
            errors.push_back(at_line(no) + "unknown criterion \"" + name + "\"");
          }
        }
      }
    }
    if (const auto complete = doc->find("complete"); complete != doc->end()) {
      if (!complete->is_boolean()) {
        errors.push_back(at_line(no) + "\"complete\" must be a boolean");
      } else {
        row.complete = complete->get<bool>();
      }
    }
    if (errors.size() != before) continue;
    row.id = *id;
    if (ids.add(row.id, no, errors)) m.add(std::move(row));
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return m;
}

LabelMatrix load_labels(const std::filesystem::path& path, LabelSource source) {
  return parse_labels(read_file(path), source);
}

std::string emit_labels(const LabelMatrix& m) {
  std::string out;
  for (const auto& row : m.rows()) {
    ordered_json rec;
    rec["id"] = row.id;
    if (row.domain) rec["domain"] = *row.domain;
    ordered_json flaws = ordered_json::array();
    for (const auto c : row.flaws.flagged()) flaws.push_back(name_of(c));
    rec["flaws"] = std::move(flaws);
    if (!row.complete) rec["complete"] = false;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

LabelMatrix labels_from_reports(std::span<const FlawReport> reports, std::span<const Question> corpus,
                                LabelSource source) {
  std::map<std::string_view, const Question*> by_id;
  for (const auto& q : corpus) by_id.emplace(q.id, &q);
  LabelMatrix m(source);
  for (const auto& r : reports) {
    LabelRow row{r.question_id, r.flaws, std::nullopt, true};
    if (const auto it = by_id.find(r.question_id); it != by_id.end()) row.domain = it->second->domain;
    m.add(std::move(row));
  }
  return m;
}

std::optional<ReportFormat> report_format_from_name(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "table") return ReportFormat::kTable;
  return std::nullopt;
}

std::string emit_report(std::span<const FlawReport> reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: {
      ordered_json arr = ordered_json::array();
      for (const auto& r : reports) arr.push_back(report_json(r));
      return arr.dump(2) + "\n";
    }
    case ReportFormat::kTsv: {
      std::string out = "id";
      for (const auto c : all_criteria()) out += "\t" + std::string(name_of(c));
      out += "\tflaw_count\tverdict\n";
      for (const auto& r : reports) {
        out += tsv_cell(r.question_id);
        for (const auto c : all_criteria()) out += r.flaws[c] ? "\t1" : "\t0";
        out += "\t" + std::to_string(r.flaw_count) + "\t" + std::string(to_string(r.verdict)) + "\n";
      }
      return out;
    }
    case ReportFormat::kTable: break;
  }
  std::size_t id_width = 2;
  for (const auto& r : reports) id_width = std::max(id_width, display_width(r.question_id));
  std::string out = pad("id", id_width) + "  flaws  " + pad("verdict", 12) + "  criteria\n";
  for (const auto& r : reports) {
    std::string names;
    for (const auto c : r.flaws.flagged()) names += (names.empty() ? "" : ", ") + std::string(name_of(c));
    out += pad(r.question_id, id_width) + "  " + pad(std::to_string(r.flaw_count), 5) + "  " +
           pad(to_string(r.verdict), 12) + "  " + (names.empty() ? "-" : names);
    while (out.ends_with(' ')) out.pop_back();
    out += '\n';
  }
  return out;
}

std::string emit_lint_summary(std::span<const FlawReport> reports, ReportFormat format) {
  std::array<std::size_t, kCriterionCount> per{};
  metrics::Histogram hist{};
  std::size_t acceptable = 0;
  for (const auto& r : reports) {
    for (const auto c : r.flaws.flagged()) ++per[index_of(c)];
    ++hist[static_cast<std::size_t>(r.flaw_count)];
    acceptable += r.verdict == Verdict::kAcceptable;
  }
  if (format == ReportFormat::kJson) {
    ordered_json s;
    s["questions"] = reports.size();
    s["acceptable"] = acceptable;
    s["unacceptable"] = reports.size() - acceptable;
    ordered_json counts = ordered_json::object();
    for (const auto c : all_criteria()) counts[std::string(name_of(c))] = per[index_of(c)];
    s["criteria"] = std::move(counts);
    s["histogram"] = hist;
    return s.dump() + "\n";
  }
  std::string out = "summary: " + std::to_string(reports.size()) + " questions, " + std::to_string(acceptable) +
                    " acceptable, " + std::to_string(reports.size() - acceptable) + " unacceptable; histogram";
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist[i] > 0) out += " " + std::to_string(i) + ":" + std::to_string(hist[i]);
  out += "; criteria";
  bool any = false;
  for (const auto c : all_criteria()) {
    if (per[index_of(c)] == 0) continue;
    out += " " + std::string(name_of(c)) + "=" + std::to_string(per[index_of(c)]);
    any = true;
  }
  if (!any) out += " none";
  return out + "\n";
}

std::string emit_audit(const judge::CorpusJudgement& run) {
  std::string out;
  for (const auto& q : run.questions) {
    for (const auto& o : q.outcomes) {
      if (!o.judged) continue;
      ordered_json rec;
      rec["id"] = q.id;
      rec["criterion"] = name_of(o.criterion);
      rec["prompt_sha256"] = o.prompt_sha256;
      rec["attempts"] = o.attempts;
      rec["cached"] = o.cached;
      rec["response"] = o.response ? ordered_json(o.response->raw) : ordered_json(nullptr);
      rec["parsed"] = o.response ? ordered_json(judge::to_string(o.response->parsed)) : ordered_json(nullptr);
      rec["indeterminate"] = o.indeterminate;
      rec["flaw"] = o.flaw;
      rec["error"] = o.error ? ordered_json(*o.error) : ordered_json(nullptr);
      out += rec.dump();
      out += '\n';
    }
  }
  return out;
}

}  // namespace iwf::io
