#include "iwf/core.hpp"

#include <algorithm>
#include <cctype>

namespace iwf {
namespace {

constexpr std::array<std::string_view, kCriterionCount> kNames = {
    "ambiguous_information", "implausible_distractors", "none_of_the_above",
    "longest_option_correct", "gratuitous_information", "true_false_question",
    "convergence_cues",      "logical_cues",            "all_of_the_above",
    "fill_in_blank",         "absolute_terms",          "word_repeats",
    "unfocused_stem",        "complex_k_type",          "grammatical_cues",
    "lost_sequence",         "vague_terms",             "more_than_one_correct",
    "negative_worded",
};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::array<CriterionId, kCriterionCount>& all_criteria() {
  static const auto kAll = [] {
    std::array<CriterionId, kCriterionCount> out{};
    for (std::size_t i = 0; i < kCriterionCount; ++i) out[i] = static_cast<CriterionId>(i);
    return out;
  }();
  return kAll;
}

CriterionId criterion_at(std::size_t index) {
  if (index >= kCriterionCount) throw InputError("criterion index out of range");
  return static_cast<CriterionId>(index);
}

std::string_view name_of(CriterionId c) { return kNames.at(index_of(c)); }

std::optional<CriterionId> criterion_from_name(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) return std::nullopt;
  return static_cast<CriterionId>(it - kNames.begin());
}

std::vector<CriterionId> parse_criteria_list(std::string_view csv) {
  std::vector<CriterionId> out;
  while (!csv.empty()) {
    const auto comma = csv.find(',');
    const auto item = trim(csv.substr(0, comma));
    if (!item.empty()) {
      const auto c = criterion_from_name(item);
      if (!c) throw InputError("unknown criterion \"" + std::string(item) + "\"");
      if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    }
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<CriterionId> FlawSet::flagged() const {
  std::vector<CriterionId> out;
  for (std::size_t i = 0; i < kCriterionCount; ++i)
    if (bits_.test(i)) out.push_back(static_cast<CriterionId>(i));
  return out;
}

std::string_view to_string(Verdict v) {
  return v == Verdict::kAcceptable ? "acceptable" : "unacceptable";
}

Verdict verdict_of(int flaw_count, int threshold) {
  if (flaw_count < 0 || flaw_count > static_cast<int>(kCriterionCount))
    throw InputError("flaw count " + std::to_string(flaw_count) + " outside [0, 19]");
  if (threshold < 1 || threshold > static_cast<int>(kCriterionCount))
    throw InputError("verdict threshold " + std::to_string(threshold) + " outside [1, 19]");
  return flaw_count < threshold ? Verdict::kAcceptable : Verdict::kUnacceptable;
}

std::string option_label(std::size_t index) {
  std::string out;
  ++index;
  while (index > 0) {
    --index;
    out.insert(out.begin(), static_cast<char>('A' + index % 26));
    index /= 26;
  }
  return out;
}

Validation validate_question(RawQuestion raw) {
  std::vector<std::string> errors;
  if (blank(raw.stem)) errors.emplace_back("empty stem");
  if (raw.options.size() < 2) errors.emplace_back("fewer than 2 options");
  for (std::size_t i = 0; i < raw.options.size(); ++i)
    if (blank(raw.options[i])) errors.push_back("empty option " + std::to_string(i));
  if (raw.answer_index < 0 || static_cast<std::size_t>(raw.answer_index) >= raw.options.size())
    errors.emplace_back("answer_index out of range");
  if (!errors.empty()) return errors;

  Question q;
  q.id = std::move(raw.id);
  q.domain = std::move(raw.domain);
  q.stem = std::move(raw.stem);
  q.options = std::move(raw.options);
  q.answer_index = static_cast<std::size_t>(raw.answer_index);
  return q;
}

FlawReport make_report(std::string question_id, FlawSet flaws, std::vector<Evidence> evidence,
                       int threshold) {
  FlawReport r;
  r.question_id = std::move(question_id);
  r.flaws = flaws;
  r.evidence = std::move(evidence);
  r.flaw_count = flaws.count();
  r.verdict = verdict_of(r.flaw_count, threshold);
  return r;
}

std::string_view to_string(LabelSource s) {
  switch (s) {
    case LabelSource::kHuman: return "human";
    case LabelSource::kRules: return "rules";
    case LabelSource::kLlm: return "llm";
    case LabelSource::kOther: break;
  }
  return "other";
}

void LabelMatrix::add(LabelRow row) {
  if (index_.contains(row.id)) throw InputError("duplicate id \"" + row.id + "\"");
  index_.emplace(row.id, rows_.size());
  rows_.push_back(std::move(row));
}

std::optional<std::size_t> LabelMatrix::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace iwf
