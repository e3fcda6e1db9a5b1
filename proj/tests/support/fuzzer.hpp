#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "iwf/core.hpp"

namespace iwf::testing {

/// Seeded generator of valid, flaw-prone questions for property tests.
///
/// Each question is assembled from fixed word pools so that every detector
/// sees both hits and misses:
///   stem     one of eight templates ("Which <noun> <verb> the <noun>?",
///            "The ____ <verb> the <noun>.", "The <noun> of the <noun>",
///            ...), with independent 25% chances of a lead-in sentence
///            (related or unrelated), a negation word, and a generic "which
///            of the following" opener
///   options  10%: 2 to 6 increasing numbers, half of them with the first
///                 and last swapped
///            10%: a true/false pair
///            80%: 2 to 6 options, each drawn from plain nouns, phrases with
///                 an absolute or vague term, numbers and masses, truth
///                 values, combination phrases ("Both A and C"), and
///                 "none/all of the above" variants, some misspelled
///   key      uniform over the options; in the mixed case, 20% of keys are
///            replaced by "The <noun> and the <noun>" echoing the stem
/// Options are made distinct only by accident; duplicates are allowed and
/// exercise more_than_one_correct.
///
/// Draws use std::mt19937_64 and modulo reduction only, so a seed gives the
/// same sequence on every platform.
class QuestionFuzzer {
 public:
  explicit QuestionFuzzer(std::uint64_t seed);

  Question next();
  std::vector<Question> batch(std::size_t n);

 private:
  std::uint64_t draw(std::uint64_t n);
  bool chance(int percent);

  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
};

}  // namespace iwf::testing
