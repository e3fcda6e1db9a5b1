#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "fuzzer.hpp"
#include "iwf/detectors.hpp"

using namespace iwf;

namespace {

Question make(std::string stem, std::vector<std::string> options, std::size_t key) {
  Question q;
  q.id = "t";
  q.stem = std::move(stem);
  q.options = std::move(options);
  q.answer_index = key;
  return q;
}

/// Heuristic scorer with a fixed answer guess.
class GuessingScorer final : public Scorer {
 public:
  explicit GuessingScorer(AnswerGuess guess) : guess_(guess) {}
  double acceptability(std::string_view t) const override { return base_.acceptability(t); }
  double plausibility(const Question& q, std::size_t i) const override { return base_.plausibility(q, i); }
  AnswerGuess answer(const Question&) const override { return guess_; }
  bool deterministic() const override { return true; }

 private:
  HeuristicScorer base_;
  AnswerGuess guess_;
};

bool span_in_bounds(const Question& q, const Span& s) {
  const std::string& text = s.option ? q.options.at(*s.option) : q.stem;
  return s.begin <= s.end && s.end <= text.size();
}

}  // namespace

TEST_SUITE("detectors") {

TEST_CASE("handcrafted fixtures") {
  const auto fixtures = testing::load_detector_fixtures();
  REQUIRE(fixtures.size() >= 2 * 3 * kCriterionCount);
  const DetectorConfig cfg;
  const HeuristicScorer scorer;
  for (const auto& f : fixtures) {
    CAPTURE(f.question.id);
    CAPTURE(f.note);
    const auto result = detect::detector_for(f.criterion)(f.question, cfg, scorer);
    CHECK(result.flag == f.expect);
    if (result.flag) {
      REQUIRE_FALSE(result.evidence.empty());
      for (const auto& e : result.evidence) {
        CHECK(e.criterion == f.criterion);
        CHECK_FALSE(e.message.empty());
        for (const auto& s : e.spans) CHECK(span_in_bounds(f.question, s));
      }
    }
  }
}

TEST_CASE("fixture coverage per criterion") {
  std::array<int, kCriterionCount> pos{}, neg{};
  for (const auto& f : testing::load_detector_fixtures()) ++(f.expect ? pos : neg)[index_of(f.criterion)];
  for (std::size_t i = 0; i < kCriterionCount; ++i) {
    CAPTURE(name_of(criterion_at(i)));
    CHECK(pos[i] >= 3);
    CHECK(neg[i] >= 3);
  }
}

TEST_CASE("answer guesses drive more_than_one_correct") {
  const auto q = make("Which gas do plants absorb?", {"Carbon dioxide", "Helium", "Neon"}, 0);
  const DetectorConfig cfg;
  CHECK_FALSE(detect::more_than_one_correct(q, cfg, GuessingScorer(AnswerGuess::option(0))).flag);
  CHECK_FALSE(detect::more_than_one_correct(q, cfg, GuessingScorer(AnswerGuess::unknown())).flag);
  CHECK(detect::more_than_one_correct(q, cfg, GuessingScorer(AnswerGuess::option(2))).flag);
  CHECK(detect::more_than_one_correct(q, cfg, GuessingScorer(AnswerGuess::multiple())).flag);
}

TEST_CASE("heuristic scorer deductions") {
  const HeuristicScorer s(8);
  CHECK(s.acceptability("Which gas do plants absorb?") == doctest::Approx(1.0));
  CHECK(s.acceptability("Which gas do plants absorb") ==
        doctest::Approx(1.0 - HeuristicScorer::kMissingQuestionMark));
  CHECK(s.acceptability("The capital city of France.") == doctest::Approx(1.0 - HeuristicScorer::kNoVerb));
  CHECK(s.acceptability("Which of these many small gases do green plants absorb during the day?") ==
        doctest::Approx(1.0 - HeuristicScorer::kTooLong));
  CHECK(s.acceptability("(Which gas do plants absorb?") == doctest::Approx(1.0 - HeuristicScorer::kUnbalanced));
  CHECK(s.acceptability("") >= 0.0);
  CHECK_FALSE(s.explain_acceptability("Which gas do plants absorb").empty());

  const auto nums = make("How many legs does a spider have?", {"8", "6", "4"}, 0);
  CHECK(s.plausibility(nums, 1) == 1.0);
  const auto letter = make("Which gas do plants absorb?", {"Carbon dioxide", "x"}, 0);
  CHECK(s.plausibility(letter, 1) == 0.0);
}

TEST_CASE("unique repeats") {
  const auto q = make("Which organelle produces energy for the cell?", {"Energy mitochondria", "Ribosome", "Nucleus"}, 0);
  CHECK(detect::unique_repeats(q) == std::set<std::string>{"energi"});
}

TEST_CASE("repeated words do not count as logical cues") {
  const auto q = make("What releases energy?", {"Energy", "Ribosome", "Nucleus"}, 0);
  const DetectorConfig cfg;
  const HeuristicScorer scorer;
  REQUIRE(detect::unique_repeats(q) == std::set<std::string>{"energi"});
  CHECK(detect::word_repeats(q, cfg, scorer).flag);
  CHECK_FALSE(detect::logical_cues(q, cfg, scorer).flag);
  // the same overlap with a word the distractors share is still a cue
  const auto shared = make("What releases energy and heat?", {"Energy and heat", "Heat", "Nucleus"}, 0);
  CHECK(detect::unique_repeats(shared) == std::set<std::string>{"energi"});
}

TEST_CASE("non-applicable detectors stay quiet") {
  const DetectorConfig cfg;
  const HeuristicScorer scorer;
  CHECK_FALSE(detect::lost_sequence(make("Pick one?", {"3", "1", "two"}, 0), cfg, scorer).flag);
  CHECK_FALSE(detect::gratuitous_information(make("My dog is brown and the sky is blue?", {"a", "b"}, 0), cfg, scorer).flag);
}

TEST_CASE("run_all marks disabled criteria") {
  const auto q = make("Which planet is closest to the Sun?", {"Mercury", "Venus", "None of the above"}, 0);
  DetectorConfig cfg;
  const std::vector<CriterionId> only{CriterionId::kNoneOfTheAbove};
  cfg.enable_only(only);
  const auto r = run_all(q, cfg, HeuristicScorer());
  CHECK(r.flaw_count == 1);
  CHECK(r.flaws[CriterionId::kNoneOfTheAbove]);
  const auto disabled = std::count_if(r.evidence.begin(), r.evidence.end(),
                                      [](const Evidence& e) { return e.message == "disabled"; });
  CHECK(disabled == 18);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_detector_config("# tuned\nfuzzy_edits = 1\ncue_margin=0.5\nthreshold = 3\ndisable = vague_terms\n");
  CHECK(cfg.fuzzy_edits == 1);
  CHECK(cfg.cue_margin == 0.5);
  CHECK(cfg.verdict_threshold == 3);
  CHECK_FALSE(cfg.is_enabled(CriterionId::kVagueTerms));
  CHECK(cfg.is_enabled(CriterionId::kAbsoluteTerms));
  const auto only = parse_detector_config("rules = fill_in_blank, vague_terms");
  CHECK(only.enabled.count() == 2);
  CHECK_THROWS_AS(parse_detector_config("bogus = 1"), InputError);
  CHECK_THROWS_AS(parse_detector_config("fuzzy_edits = 9"), InputError);
  CHECK_THROWS_AS(parse_detector_config("cue_margin = abc"), InputError);
  CHECK_THROWS_AS(parse_detector_config("rules = nope"), InputError);
  DetectorConfig bad;
  bad.ambiguity_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("run_corpus is independent of job count") {
  const auto corpus = testing::QuestionFuzzer(7).batch(200);
  const DetectorConfig cfg;
  const HeuristicScorer scorer;
  const auto one = run_corpus(corpus, cfg, scorer, 1);
  const auto many = run_corpus(corpus, cfg, scorer, 6);
  REQUIRE(one.size() == many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].question_id == corpus[i].id);
    CHECK(one[i].flaws == many[i].flaws);
    CHECK(one[i].evidence == many[i].evidence);
  }
}

TEST_CASE("fuzzer is reproducible and valid") {
  const auto a = testing::QuestionFuzzer(42).batch(50);
  const auto b = testing::QuestionFuzzer(42).batch(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].stem == b[i].stem);
    CHECK(a[i].options == b[i].options);
    CHECK(a[i].answer_index < a[i].options.size());
    CHECK(a[i].options.size() >= 2);
    CHECK(a[i].options.size() <= 6);
  }
}

}
