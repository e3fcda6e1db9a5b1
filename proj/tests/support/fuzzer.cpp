#include "fuzzer.hpp"

#include <array>
#include <string>

namespace iwf::testing {
namespace {

constexpr std::array<const char*, 16> kNouns = {
    "enzyme", "cell", "protein", "membrane", "atom", "molecule", "gas", "acid",
    "sample", "planet", "variable", "mean", "nucleus", "photon", "river", "market"};
constexpr std::array<const char*, 8> kVerbs = {"binds", "absorbs", "releases", "controls",
                                               "produces", "measures", "contains", "blocks"};
constexpr std::array<const char*, 9> kAbsolute = {"never", "always", "all", "none", "every",
                                                  "only", "impossible", "guaranteed", "must"};
constexpr std::array<const char*, 8> kVague = {"frequently", "occasionally", "rarely", "sometimes",
                                               "often", "usually", "seldom", "generally"};
constexpr std::array<const char*, 7> kNegations = {"not", "except", "least", "incorrect", "never", "cannot", "don't"};
constexpr std::array<const char*, 8> kPhrases = {"None of the above", "none of these", "All of the above",
                                                 "all of them", "none of the abve", "All the above",
                                                 "Nonee of the above", "all of thes"};
constexpr std::array<const char*, 6> kCombos = {"Both A and C", "1 and 3 only", "All except B",
                                                "A, B and D", "B only", "I and II"};
constexpr std::array<const char*, 6> kTruth = {"True", "False", "Yes", "No", "T", "F"};
constexpr std::array<const char*, 6> kLeadIns = {"My cousin visited the coast last summer. ",
                                                 "The lab was noisy during the session. ",
                                                 "Enzymes are proteins. ",
                                                 "A sample was heated. ",
                                                 "Markets opened early. ",
                                                 "Every planet orbits a star. "};

template <std::size_t N>
std::string pick(const std::array<const char*, N>& pool, std::uint64_t i) {
  return pool[i % N];
}

}  // namespace

QuestionFuzzer::QuestionFuzzer(std::uint64_t seed) : rng_(seed) {}

std::uint64_t QuestionFuzzer::draw(std::uint64_t n) { return rng_() % n; }

bool QuestionFuzzer::chance(int percent) { return draw(100) < static_cast<std::uint64_t>(percent); }

Question QuestionFuzzer::next() {
  Question q;
  q.id = "fz" + std::to_string(counter_++);
  const auto noun = [&] { return pick(kNouns, draw(kNouns.size())); };
  const auto verb = [&] { return pick(kVerbs, draw(kVerbs.size())); };

  const std::string n1 = noun(), n2 = noun();
  std::string stem;
  if (chance(25)) stem += pick(kLeadIns, draw(kLeadIns.size()));
  const std::string neg = chance(25) ? pick(kNegations, draw(kNegations.size())) + " " : "";
  switch (draw(8)) {
    case 0: stem += "Which " + n1 + " " + neg + verb() + " the " + n2 + "?"; break;
    case 1: stem += "The ____ " + neg + verb() + " the " + n1 + "."; break;
    case 2: stem += "What " + neg + verb() + " a " + n1 + " in the " + n2 + "?"; break;
    case 3: stem += "The " + n1 + " " + neg + verb() + " an"; break;
    case 4: stem += "Which of the following is " + neg + "true?"; break;
    case 5: stem += "How many " + n1 + "s does the " + n2 + " " + neg + "contain?"; break;
    case 6: stem += "The " + n1 + " of the " + n2; break;
    default: stem += "It " + neg + verb() + " the " + n1 + " why"; break;
  }
  if (chance(25)) stem = "Which of the following " + noun() + "s " + verb() + " " + stem;
  q.stem = stem;

  const std::uint64_t mode = draw(10);
  std::size_t k = 2 + draw(5);
  if (mode == 0) {
    // all numeric, ascending half the time
    std::uint64_t v = draw(50);
    for (std::size_t i = 0; i < k; ++i) q.options.push_back(std::to_string(v += 1 + draw(20)));
    if (chance(50)) std::swap(q.options.front(), q.options.back());
  } else if (mode == 1) {
    k = 2;
    q.options = {pick(kTruth, 2 * draw(3)), pick(kTruth, 2 * draw(3) + 1)};
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      switch (draw(7)) {
        case 0: q.options.push_back(noun()); break;
        case 1: q.options.push_back("It " + pick(kAbsolute, draw(kAbsolute.size())) + " " + verb() + " the " + noun()); break;
        case 2: q.options.push_back("It " + pick(kVague, draw(kVague.size())) + " " + verb() + " the " + noun()); break;
        case 3: q.options.push_back(draw(2) ? std::to_string(draw(2000)) : std::to_string(1 + draw(40)) + " g"); break;
        case 4: q.options.push_back(pick(kTruth, draw(kTruth.size()))); break;
        case 5: q.options.push_back(pick(kCombos, draw(kCombos.size()))); break;
        default: q.options.push_back(pick(kPhrases, draw(kPhrases.size()))); break;
      }
    }
  }
  q.answer_index = draw(k);
  // a key that echoes the stem
  if (mode > 1 && chance(20)) q.options[q.answer_index] = "The " + n1 + " and the " + n2;
  return q;
}

std::vector<Question> QuestionFuzzer::batch(std::size_t n) {
  std::vector<Question> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next());
  return out;
}

}  // namespace iwf::testing
