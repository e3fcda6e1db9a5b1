#pragma once

#include <bitset>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iwf/core.hpp"

namespace iwf {

/// Thresholds and switches for the rule engine. Defaults are the reference
/// behaviour; `validate` enforces the documented ranges.
struct DetectorConfig {
  int fuzzy_edits = 2;                   // [0, 5]
  double cue_margin = 0.34;              // [0, 1]
  double ambiguity_threshold = 0.5;      // [0, 1]
  double plausibility_threshold = 0.25;  // [0, 1]
  std::size_t stem_token_limit = 60;     // [1, 10000]
  int verdict_threshold = kDefaultVerdictThreshold;  // [1, 19]
  std::bitset<kCriterionCount> enabled = std::bitset<kCriterionCount>().set();

  bool is_enabled(CriterionId c) const { return enabled.test(index_of(c)); }
  void enable_only(std::span<const CriterionId> criteria);

  /// Throws InputError naming the first out-of-range field.
  void validate() const;
};

/// Applies `key = value` lines on top of `base`. Recognised keys:
/// fuzzy_edits, cue_margin, ambiguity_threshold, plausibility_threshold,
/// stem_token_limit, threshold, rules (comma list to enable), disable
/// (comma list). '#' starts a comment. Throws InputError with the line
/// number on unknown keys or bad values.
DetectorConfig parse_detector_config(std::string_view content, DetectorConfig base = {});
DetectorConfig load_detector_config(const std::filesystem::path& path, DetectorConfig base = {});

struct AnswerGuess {
  enum class Kind { kIndex, kMultiple, kUnknown };
  Kind kind = Kind::kUnknown;
  std::size_t index = 0;

  static AnswerGuess unknown() { return {}; }
  static AnswerGuess multiple() { return {Kind::kMultiple, 0}; }
  static AnswerGuess option(std::size_t i) { return {Kind::kIndex, i}; }
};

/// Model-backed judgements used by three detectors. Implementations must be
/// safe to call concurrently through a const reference.
class Scorer {
 public:
  virtual ~Scorer() = default;

  /// How well-formed the text reads, in [0, 1].
  virtual double acceptability(std::string_view text) const = 0;
  /// How plausible option `option` is as a distractor, in [0, 1].
  virtual double plausibility(const Question& q, std::size_t option) const = 0;
  virtual AnswerGuess answer(const Question& q) const = 0;
  /// Whether equal inputs always give equal outputs.
  virtual bool deterministic() const = 0;

  /// Human-readable reasons behind an acceptability score, if available.
  virtual std::vector<std::string> explain_acceptability(std::string_view) const { return {}; }
};

/// Offline default scorer built from text-kit heuristics.
///
/// Acceptability starts at 1.0 and loses a fixed amount per problem found
/// in the text, floored at 0:
///   interrogative opener without a closing '?'   0.2
///   no verb-like token                           0.6
///   more than `stem_token_limit` word tokens     0.2
///   opens with a pronoun lacking an antecedent   0.3
///   unbalanced brackets or double quotes         0.3
///
/// Plausibility of a distractor is 1 when it and the keyed option both
/// parse as numbers, 0 when it has fewer than 2 characters, and otherwise the
/// larger overlap similarity with the stem or the keyed option.
///
/// answer() always reports unknown.
class HeuristicScorer final : public Scorer {
 public:
  static constexpr double kMissingQuestionMark = 0.2;
  static constexpr double kNoVerb = 0.6;
  static constexpr double kTooLong = 0.2;
  static constexpr double kPronounOpener = 0.3;
  static constexpr double kUnbalanced = 0.3;

  explicit HeuristicScorer(std::size_t stem_token_limit = 60) : stem_token_limit_(stem_token_limit) {}

  double acceptability(std::string_view text) const override;
  double plausibility(const Question& q, std::size_t option) const override;
  AnswerGuess answer(const Question&) const override { return AnswerGuess::unknown(); }
  bool deterministic() const override { return true; }
  std::vector<std::string> explain_acceptability(std::string_view text) const override;

 private:
  std::size_t stem_token_limit_;
};

namespace detect {

struct DetectorResult {
  bool flag = false;
  std::vector<Evidence> evidence;  // nonempty whenever flag is set
};

using Detector = DetectorResult (*)(const Question&, const DetectorConfig&, const Scorer&);

DetectorResult none_of_the_above(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult all_of_the_above(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult longest_option_correct(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult true_false_question(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult absolute_terms(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult vague_terms(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult negative_worded(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult fill_in_blank(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult complex_k_type(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult lost_sequence(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult word_repeats(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult convergence_cues(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult grammatical_cues(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult unfocused_stem(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult gratuitous_information(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult logical_cues(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult ambiguous_information(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult implausible_distractors(const Question&, const DetectorConfig&, const Scorer&);
DetectorResult more_than_one_correct(const Question&, const DetectorConfig&, const Scorer&);

Detector detector_for(CriterionId c);

/// Stemmed content words shared by the stem and the keyed option that no
/// distractor contains.
std::set<std::string> unique_repeats(const Question& q);

}  // namespace detect

/// Runs every enabled detector. Disabled criteria stay false and carry a
/// "disabled" evidence note.
FlawReport run_all(const Question& q, const DetectorConfig& cfg, const Scorer& scorer);

/// run_all over a corpus, fanned out over `jobs` threads; output follows
/// input order.
std::vector<FlawReport> run_corpus(std::span<const Question> corpus, const DetectorConfig& cfg,
                                   const Scorer& scorer, unsigned jobs = 1);

}  // namespace iwf
