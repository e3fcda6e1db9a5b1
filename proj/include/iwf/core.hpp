#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace iwf {

/// Raised for malformed inputs: bad counts, unknown names, invalid files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 19 rubric criteria. The enumerator value is the label-vector index.
enum class CriterionId : std::uint8_t {
  kAmbiguousInformation,
  kImplausibleDistractors,
  kNoneOfTheAbove,
  kLongestOptionCorrect,
  kGratuitousInformation,
  kTrueFalseQuestion,
  kConvergenceCues,
  kLogicalCues,
  kAllOfTheAbove,
  kFillInBlank,
  kAbsoluteTerms,
  kWordRepeats,
  kUnfocusedStem,
  kComplexKType,
  kGrammaticalCues,
  kLostSequence,
  kVagueTerms,
  kMoreThanOneCorrect,
  kNegativeWorded,
};

inline constexpr std::size_t kCriterionCount = 19;

/// Canonical criterion order, used for label vectors and output columns.
const std::array<CriterionId, kCriterionCount>& all_criteria();

constexpr std::size_t index_of(CriterionId c) { return static_cast<std::size_t>(c); }
CriterionId criterion_at(std::size_t index);
std::string_view name_of(CriterionId c);
std::optional<CriterionId> criterion_from_name(std::string_view name);

/// Parses a comma-separated list of criterion names. Throws InputError on
/// an unknown name.
std::vector<CriterionId> parse_criteria_list(std::string_view csv);

/// Presence bits for all criteria; a set bit means the criterion is violated.
class FlawSet {
 public:
  FlawSet() = default;

  bool operator[](CriterionId c) const { return bits_.test(index_of(c)); }
  bool at(std::size_t i) const { return bits_.test(i); }
  void set(CriterionId c, bool value = true) { bits_.set(index_of(c), value); }
  void set_index(std::size_t i, bool value = true) { bits_.set(i, value); }

  int count() const { return static_cast<int>(bits_.count()); }
  bool none() const { return bits_.none(); }
  std::vector<CriterionId> flagged() const;

  friend bool operator==(const FlawSet&, const FlawSet&) = default;

 private:
  std::bitset<kCriterionCount> bits_;
};

enum class Verdict { kAcceptable, kUnacceptable };

inline constexpr int kDefaultVerdictThreshold = 2;

std::string_view to_string(Verdict v);

/// A question is unacceptable once its flaw count reaches `threshold`.
/// Throws InputError when flaw_count is outside [0, 19] or threshold
/// outside [1, 19].
Verdict verdict_of(int flaw_count, int threshold = kDefaultVerdictThreshold);

struct Question {
  std::string id;
  std::optional<std::string> domain;
  std::string stem;
  std::vector<std::string> options;
  std::size_t answer_index = 0;

  const std::string& keyed_option() const { return options[answer_index]; }
  std::size_t option_count() const { return options.size(); }
};

/// Option letter as shown to readers: A..Z, then AA, AB, ...
std::string option_label(std::size_t index);

/// Unchecked question fields as read from a file or a binding.
struct RawQuestion {
  std::string id;
  std::optional<std::string> domain;
  std::string stem;
  std::vector<std::string> options;
  std::int64_t answer_index = 0;
};

/// Either a valid Question or every invariant it violates.
using Validation = std::variant<Question, std::vector<std::string>>;

Validation validate_question(RawQuestion raw);

/// Where an evidence span points: the stem, or one option by index.
struct Span {
  std::optional<std::size_t> option;  // nullopt = stem
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Evidence {
  CriterionId criterion{};
  std::string message;
  std::vector<Span> spans;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct FlawReport {
  std::string question_id;
  FlawSet flaws;
  std::vector<Evidence> evidence;
  int flaw_count = 0;
  Verdict verdict = Verdict::kAcceptable;
};

/// Builds a report with flaw_count and verdict derived from `flaws`.
FlawReport make_report(std::string question_id, FlawSet flaws, std::vector<Evidence> evidence,
                       int threshold = kDefaultVerdictThreshold);

enum class LabelSource { kHuman, kRules, kLlm, kOther };

std::string_view to_string(LabelSource s);

struct LabelRow {
  std::string id;
  FlawSet flaws;
  std::optional<std::string> domain;
  bool complete = true;
};

/// Per-question flaw labels from one labeler, in a fixed question order.
class LabelMatrix {
 public:
  explicit LabelMatrix(LabelSource source = LabelSource::kOther) : source_(source) {}

  /// Throws InputError if the id is already present.
  void add(LabelRow row);

  LabelSource source() const { return source_; }
  void set_source(LabelSource s) { source_ = s; }
  const std::vector<LabelRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const LabelRow& operator[](std::size_t i) const { return rows_[i]; }

  /// Row index for an id, if present.
  std::optional<std::size_t> find(std::string_view id) const;

 private:
  LabelSource source_;
  std::vector<LabelRow> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace iwf
