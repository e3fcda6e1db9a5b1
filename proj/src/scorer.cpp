#include <algorithm>

#include "iwf/detectors.hpp"
#include "iwf/text.hpp"

namespace iwf {
namespace {

const std::set<std::string, std::less<>> kInterrogatives = {
    "what", "which", "who", "whom", "whose", "when", "where", "why", "how"};

bool verb_like(const text::Token& t) {
  if (t.cls != text::TokenClass::kWord) return false;
  const auto& w = t.normal;
  if (text::lexicons().verbs.contains(w)) return true;
  if (w.size() > 4 && (w.ends_with("ed") || w.ends_with("ing") || w.ends_with("ize") ||
                       w.ends_with("ise") || w.ends_with("ate")))
    return true;
  return w.size() > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") &&
         !w.ends_with("is");
}

struct Problems {
  bool missing_question_mark = false;
  bool no_verb = false;
  bool too_long = false;
  bool pronoun_opener = false;
  bool unbalanced = false;
};

Problems inspect(std::string_view text, std::size_t stem_token_limit) {
  Problems p;
  const auto tokens = text::tokenize(text);
  std::vector<const text::Token*> words;
  for (const auto& t : tokens)
    if (t.wordlike()) words.push_back(&t);

  const auto trimmed = text::trim(text);
  if (!words.empty()) {
    const auto& first = words.front()->normal;
    const bool interrogative =
        kInterrogatives.contains(first) || text::lexicons().verbs.contains(first);
    p.missing_question_mark = interrogative && (trimmed.empty() || trimmed.back() != '?');
    p.pronoun_opener = text::lexicons().pronouns.contains(first);
  }
  p.no_verb = std::none_of(tokens.begin(), tokens.end(), verb_like);
  p.too_long = words.size() > stem_token_limit;
  const auto count = [&](char c) { return std::count(text.begin(), text.end(), c); };
  p.unbalanced = count('(') != count(')') || count('[') != count(']') || count('"') % 2 != 0;
  return p;
}

}  // namespace

double HeuristicScorer::acceptability(std::string_view text) const {
  const auto p = inspect(text, stem_token_limit_);
  double score = 1.0;
  if (p.missing_question_mark) score -= kMissingQuestionMark;
  if (p.no_verb) score -= kNoVerb;
  if (p.too_long) score -= kTooLong;
  if (p.pronoun_opener) score -= kPronounOpener;
  if (p.unbalanced) score -= kUnbalanced;
  return std::max(0.0, score);
}

std::vector<std::string> HeuristicScorer::explain_acceptability(std::string_view text) const {
  const auto p = inspect(text, stem_token_limit_);
  std::vector<std::string> out;
  if (p.missing_question_mark) out.emplace_back("question without a closing '?'");
  if (p.no_verb) out.emplace_back("no verb-like word");
  if (p.too_long) out.push_back("longer than " + std::to_string(stem_token_limit_) + " words");
  if (p.pronoun_opener) out.emplace_back("opens with a pronoun");
  if (p.unbalanced) out.emplace_back("unbalanced brackets or quotes");
  return out;
}

double HeuristicScorer::plausibility(const Question& q, std::size_t option) const {
  const auto& text = q.options.at(option);
  // Numeric first: single-digit answers are ordinary distractors.
  if (text::parse_numeric(text) && text::parse_numeric(q.keyed_option())) return 1.0;
  if (text::codepoint_count(text::trim(text)) < 2) return 0.0;
  return std::max(text::overlap_similarity(text, q.stem),
                  text::overlap_similarity(text, q.keyed_option()));
}

}  // namespace iwf
