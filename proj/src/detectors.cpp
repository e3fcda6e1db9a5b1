#include "iwf/detectors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <map>
#include <regex>
#include <thread>

#include "iwf/text.hpp"

namespace iwf {
namespace detect {
namespace {

using text::Token;
using text::TokenClass;
using text::WordSet;

Span stem_span(std::size_t b, std::size_t e) { return {std::nullopt, b, e}; }
Span option_span(std::size_t i, std::size_t b, std::size_t e) { return {i, b, e}; }

DetectorResult flagged(CriterionId c, std::string message, std::vector<Span> spans = {}) {
  return {true, {Evidence{c, std::move(message), std::move(spans)}}};
}

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string join(const std::set<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ", ";
    out += w;
  }
  return out;
}

std::vector<const Token*> words_of(const std::vector<Token>& tokens) {
  std::vector<const Token*> out;
  for (const auto& t : tokens)
    if (t.wordlike()) out.push_back(&t);
  return out;
}

struct CharRange {
  std::size_t begin;
  std::size_t end;
};

bool inside(const std::vector<CharRange>& ranges, const Token& t) {
  return std::any_of(ranges.begin(), ranges.end(),
                     [&](const CharRange& r) { return t.begin >= r.begin && t.end <= r.end; });
}

std::vector<CharRange> phrase_matches(std::string_view text, const text::Lexicon& phrases,
                                      int max_edits) {
  std::vector<CharRange> out;
  for (const auto& p : phrases.entries) {
    const auto m = text::fuzzy_contains(text, p, max_edits);
    if (m.found) out.push_back({m.begin, m.end});
  }
  return out;
}

/// Lexicon entries found in `text`, skipping tokens inside `excluded`.
/// Multi-word entries match consecutive word tokens.
std::vector<std::pair<std::string, CharRange>> lexicon_hits(
    std::string_view text, const text::Lexicon& lexicon, const std::vector<CharRange>& excluded) {
  const auto tokens = text::tokenize(text);
  const auto words = words_of(tokens);
  std::vector<std::pair<std::string, CharRange>> hits;
  for (const auto& entry : lexicon.entries) {
    const auto parts = text::tokenize(entry);
    if (parts.empty() || parts.size() > words.size()) continue;
    for (std::size_t i = 0; i + parts.size() <= words.size(); ++i) {
      bool match = true;
      for (std::size_t j = 0; match && j < parts.size(); ++j)
        match = words[i + j]->normal == parts[j].normal && !inside(excluded, *words[i + j]);
      if (match) hits.push_back({entry, {words[i]->begin, words[i + parts.size() - 1]->end}});
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const auto& a, const auto& b) { return a.second.begin < b.second.begin; });
  return hits;
}

DetectorResult phrase_option_detector(CriterionId c, const Question& q, const text::Lexicon& phrases,
                                      int max_edits) {
  DetectorResult r;
  std::vector<Span> spans;
  std::string message;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    for (const auto& p : phrases.entries) {
      const auto m = text::fuzzy_contains(q.options[i], p, max_edits);
      if (!m.found) continue;
      spans.push_back(option_span(i, m.begin, m.end));
      if (message.empty())
        message = "option " + option_label(i) + " matches " + quote(p) +
                  (m.edits == 0 ? "" : " within " + std::to_string(m.edits) + " edit(s)");
      break;
    }
  }
  if (spans.empty()) return r;
  return flagged(c, message, std::move(spans));
}

DetectorResult option_lexicon_detector(CriterionId c, const Question& q, const text::Lexicon& lexicon,
                                       const DetectorConfig& cfg, std::string_view kind) {
  const auto& lex = text::lexicons();
  std::vector<Span> spans;
  std::set<std::string> terms;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    auto excluded = phrase_matches(q.options[i], lex.none_of_the_above, cfg.fuzzy_edits);
    const auto aota = phrase_matches(q.options[i], lex.all_of_the_above, cfg.fuzzy_edits);
    excluded.insert(excluded.end(), aota.begin(), aota.end());
    for (const auto& [term, range] : lexicon_hits(q.options[i], lexicon, excluded)) {
      spans.push_back(option_span(i, range.begin, range.end));
      terms.insert(term);
    }
  }
  if (spans.empty()) return {};
  return flagged(c, std::string(kind) + " term(s) in options: " + join(terms), std::move(spans));
}

std::string normalized_option(std::string_view s) {
  auto t = text::to_lower(text::trim(s));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  return std::string(text::trim(t));
}

bool has_negation(const std::vector<Token>& tokens) {
  return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
    return t.normal == "not" || t.normal == "no" || t.normal == "never" || t.normal.ends_with("n't");
  });
}

struct BlankMarker {
  std::size_t begin;
  std::size_t end;
};

std::vector<BlankMarker> blank_markers(std::string_view stem) {
  std::vector<BlankMarker> out;
  const auto lower = text::to_lower(stem);
  std::size_t i = 0;
  while (i < stem.size()) {
    std::size_t j = i;
    if (stem[i] == '_' || stem[i] == '.') {
      while (j < stem.size() && stem[j] == stem[i]) ++j;
      if (j - i >= 3) {
        out.push_back({i, j});
        i = j;
        continue;
      }
      i = j;
      continue;
    }
    if (lower.compare(i, 7, "[blank]") == 0) {
      out.push_back({i, i + 7});
      i += 7;
      continue;
    }
    if (stem.compare(i, 3, "\xE2\x80\xA6") == 0) {
      out.push_back({i, i + 3});
      i += 3;
      continue;
    }
    ++i;
  }
  return out;
}

bool only_punctuation_after(std::string_view s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (std::isalnum(c) || c >= 0x80) return false;
  }
  return true;
}

const std::regex& k_type_patterns() {
  // Option references: letters A-H, digits 1-9, roman numerals I-VIII.
  static const std::string kLabel = R"((?:[A-H]|[1-9]|IV|VI{0,3}|I{1,3}))";
  static const std::regex kPattern(
      R"(\b)" + kLabel + R"(\b(?:\s*,\s*)" + kLabel + R"(\b)*\s*,?\s*(?:[Aa]nd|&)\s*)" + kLabel +
      R"(\b|\b[Bb]oth\b.+\b[Aa]nd\b|\b)" + kLabel + R"(\b(?:\s*(?:,|[Aa]nd|&)\s*)" + kLabel +
      R"(\b)*\s+[Oo]nly\b|\b[Aa]ll\s+(?:[Ee]xcept|[Bb]ut)\s+)" + kLabel + R"(\b)");
  return kPattern;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool starts_with_vowel(std::string_view option) {
  for (const auto& t : text::tokenize(option))
    if (t.wordlike()) return std::string_view("aeiou").find(t.normal.front()) != std::string_view::npos;
  return false;
}

// -1 unknown, 0 singular, 1 plural
int head_number(std::string_view option) {
  const auto tokens = text::tokenize(option);
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (it->cls == TokenClass::kPunct) continue;
    if (it->cls == TokenClass::kNumber) return -1;
    const auto& w = it->normal;
    const bool plural = w.size() > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") &&
                        !w.ends_with("is") && text::stem(w) != w;
    return plural ? 1 : 0;
  }
  return -1;
}

std::pair<char, int> style_signature(std::string_view option) {
  const auto t = text::trim(option);
  char terminal = '\0';
  if (!t.empty() && std::string_view(".!?;:").find(t.back()) != std::string_view::npos) terminal = t.back();
  int initial = 2;
  if (!t.empty() && t.front() >= 'A' && t.front() <= 'Z') initial = 0;
  if (!t.empty() && t.front() >= 'a' && t.front() <= 'z') initial = 1;
  return {terminal, initial};
}

/// Removes whole-word occurrences of each phrase; reports whether any was found.
bool strip_phrases(std::string& lower, const text::Lexicon& phrases) {
  bool found = false;
  for (const auto& p : phrases.entries) {
    std::size_t pos = 0;
    while ((pos = lower.find(p, pos)) != std::string::npos) {
      const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(lower[pos - 1]));
      const std::size_t end = pos + p.size();
      const bool right_ok = end >= lower.size() || !std::isalnum(static_cast<unsigned char>(lower[end]));
      if (left_ok && right_ok) {
        lower.replace(pos, p.size(), std::string(p.size(), ' '));
        found = true;
      }
      pos = end;
    }
  }
  return found;
}

}  // namespace

std::set<std::string> unique_repeats(const Question& q) {
  const auto stem_words = text::content_words(q.stem);
  const auto key_words = text::content_words(q.keyed_option());
  WordSet distractor_words;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    if (i == q.answer_index) continue;
    const auto w = text::content_words(q.options[i]);
    distractor_words.insert(w.begin(), w.end());
  }
  std::set<std::string> out;
  for (const auto& w : stem_words)
    if (key_words.contains(w) && !distractor_words.contains(w)) out.insert(w);
  return out;
}

DetectorResult none_of_the_above(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  return phrase_option_detector(CriterionId::kNoneOfTheAbove, q, text::lexicons().none_of_the_above,
                                cfg.fuzzy_edits);
}

DetectorResult all_of_the_above(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  return phrase_option_detector(CriterionId::kAllOfTheAbove, q, text::lexicons().all_of_the_above,
                                cfg.fuzzy_edits);
}

DetectorResult longest_option_correct(const Question& q, const DetectorConfig&, const Scorer&) {
  const auto chars = [](std::string_view s) { return text::codepoint_count(text::trim(s)); };
  const auto words = [](std::string_view s) { return words_of(text::tokenize(s)).size(); };
  const auto key_chars = chars(q.keyed_option());
  const auto key_words = words(q.keyed_option());
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    if (i == q.answer_index) continue;
    if (chars(q.options[i]) >= key_chars || words(q.options[i]) > key_words) return {};
  }
  const auto t = text::trim(q.keyed_option());
  const auto offset = static_cast<std::size_t>(t.data() - q.keyed_option().data());
  return flagged(CriterionId::kLongestOptionCorrect,
                 "keyed option " + option_label(q.answer_index) + " is the longest (" +
                     std::to_string(key_chars) + " characters)",
                 {option_span(q.answer_index, offset, offset + t.size())});
}

DetectorResult true_false_question(const Question& q, const DetectorConfig&, const Scorer&) {
  static const std::set<std::string, std::less<>> kTruthValues = {"true", "false", "yes", "no", "t", "f"};
  const bool all_truth = std::all_of(q.options.begin(), q.options.end(), [](const std::string& o) {
    return kTruthValues.contains(normalized_option(o));
  });
  if (all_truth) return flagged(CriterionId::kTrueFalseQuestion, "options are truth values only");

  std::vector<WordSet> words;
  std::vector<bool> negated;
  for (const auto& o : q.options) {
    words.push_back(text::content_words(o));
    negated.push_back(has_negation(text::tokenize(o)));
  }
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    for (std::size_t j = i + 1; j < q.options.size(); ++j) {
      if (negated[i] != negated[j] && !words[i].empty() && words[i] == words[j]) {
        return flagged(CriterionId::kTrueFalseQuestion,
                       "options " + option_label(i) + " and " + option_label(j) +
                           " are a statement and its negation",
                       {option_span(i, 0, q.options[i].size()), option_span(j, 0, q.options[j].size())});
      }
    }
  }
  return {};
}

DetectorResult absolute_terms(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  return option_lexicon_detector(CriterionId::kAbsoluteTerms, q, text::lexicons().absolute_terms, cfg,
                                 "absolute");
}

DetectorResult vague_terms(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  return option_lexicon_detector(CriterionId::kVagueTerms, q, text::lexicons().vague_terms, cfg, "vague");
}

DetectorResult negative_worded(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  const auto& lex = text::lexicons();
  const auto excluded = phrase_matches(q.stem, lex.none_of_the_above, cfg.fuzzy_edits);
  const auto hits = lexicon_hits(q.stem, lex.negative_terms, excluded);
  if (hits.empty()) return {};
  std::vector<Span> spans;
  std::set<std::string> terms;
  for (const auto& [term, range] : hits) {
    spans.push_back(stem_span(range.begin, range.end));
    terms.insert(term);
  }
  return flagged(CriterionId::kNegativeWorded, "negation in stem: " + join(terms), std::move(spans));
}

DetectorResult fill_in_blank(const Question& q, const DetectorConfig&, const Scorer&) {
  for (const auto& m : blank_markers(q.stem)) {
    if (!only_punctuation_after(q.stem, m.end))
      return flagged(CriterionId::kFillInBlank, "blank in the middle of the stem",
                     {stem_span(m.begin, m.end)});
  }
  return {};
}

DetectorResult complex_k_type(const Question& q, const DetectorConfig&, const Scorer&) {
  std::vector<Span> spans;
  std::string first;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    std::smatch m;
    if (std::regex_search(q.options[i], m, k_type_patterns())) {
      const auto b = static_cast<std::size_t>(m.position(0));
      spans.push_back(option_span(i, b, b + static_cast<std::size_t>(m.length(0))));
      if (first.empty()) first = "option " + option_label(i) + " combines other responses: " + quote(m.str(0));
    }
  }
  if (spans.empty()) return {};
  return flagged(CriterionId::kComplexKType, first, std::move(spans));
}

DetectorResult lost_sequence(const Question& q, const DetectorConfig&, const Scorer&) {
  std::vector<double> values;
  for (const auto& o : q.options) {
    const auto v = text::parse_numeric(o);
    if (!v) return {};
    values.push_back(v->value);
  }
  const bool ascending = std::is_sorted(values.begin(), values.end());
  const bool descending = std::is_sorted(values.begin(), values.end(), std::greater<>());
  if (ascending || descending) return {};
  std::string listed;
  for (double v : values) listed += (listed.empty() ? "" : ", ") + format_value(v);
  return flagged(CriterionId::kLostSequence, "numeric options out of order: " + listed);
}

DetectorResult word_repeats(const Question& q, const DetectorConfig&, const Scorer&) {
  const auto repeats = unique_repeats(q);
  if (repeats.empty()) return {};
  std::vector<Span> spans;
  for (const auto& t : text::tokenize(q.stem))
    if (t.wordlike() && repeats.contains(t.stem)) spans.push_back(stem_span(t.begin, t.end));
  for (const auto& t : text::tokenize(q.keyed_option()))
    if (t.wordlike() && repeats.contains(t.stem)) spans.push_back(option_span(q.answer_index, t.begin, t.end));
  return flagged(CriterionId::kWordRepeats, "stem and keyed option share: " + join(repeats),
                 std::move(spans));
}

DetectorResult convergence_cues(const Question& q, const DetectorConfig&, const Scorer&) {
  std::vector<WordSet> words;
  std::map<std::string, int> option_count;
  for (const auto& o : q.options) {
    words.push_back(text::content_words(o));
    for (const auto& w : words.back()) ++option_count[w];
  }
  std::vector<int> score(q.options.size(), 0);
  for (std::size_t i = 0; i < q.options.size(); ++i)
    for (const auto& w : words[i]) score[i] += option_count[w] - 1;

  const int key_score = score[q.answer_index];
  for (std::size_t i = 0; i < q.options.size(); ++i)
    if (i != q.answer_index && score[i] >= key_score) return {};
  std::set<std::string> shared;
  for (const auto& w : words[q.answer_index])
    if (option_count[w] >= 2) shared.insert(w);
  if (shared.size() < 2) return {};
  return flagged(CriterionId::kConvergenceCues,
                 "keyed option combines the most repeated components: " + join(shared),
                 {option_span(q.answer_index, 0, q.keyed_option().size())});
}

DetectorResult grammatical_cues(const Question& q, const DetectorConfig&, const Scorer&) {
  const auto stem_tokens = text::tokenize(q.stem);
  const auto stem_words = words_of(stem_tokens);
  const std::size_t k = q.options.size();
  const auto isolates_key = [&](auto&& agrees, auto&& disagrees) {
    if (!agrees(q.answer_index)) return false;
    for (std::size_t i = 0; i < k; ++i)
      if (i != q.answer_index && !disagrees(i)) return false;
    return true;
  };

  if (!stem_words.empty()) {
    const auto& last = *stem_words.back();
    if (last.normal == "a" || last.normal == "an") {
      const bool want_vowel = last.normal == "an";
      const auto agrees = [&](std::size_t i) { return starts_with_vowel(q.options[i]) == want_vowel; };
      const auto disagrees = [&](std::size_t i) { return !agrees(i); };
      if (isolates_key(agrees, disagrees))
        return flagged(CriterionId::kGrammaticalCues,
                       "only the keyed option agrees with the article " + quote(last.surface),
                       {stem_span(last.begin, last.end)});
    }
    int verb_number = -1;
    if (last.normal == "is" || last.normal == "was") verb_number = 0;
    if (last.normal == "are" || last.normal == "were") verb_number = 1;
    if (verb_number >= 0) {
      const auto agrees = [&](std::size_t i) { return head_number(q.options[i]) == verb_number; };
      const auto disagrees = [&](std::size_t i) { return head_number(q.options[i]) == 1 - verb_number; };
      if (isolates_key(agrees, disagrees))
        return flagged(CriterionId::kGrammaticalCues,
                       "only the keyed option agrees in number with " + quote(last.surface),
                       {stem_span(last.begin, last.end)});
    }
  }

  if (k >= 3) {
    std::optional<std::pair<char, int>> shared;
    bool uniform = true;
    for (std::size_t i = 0; i < k && uniform; ++i) {
      if (i == q.answer_index) continue;
      const auto sig = style_signature(q.options[i]);
      if (!shared) shared = sig;
      uniform = *shared == sig;
    }
    if (uniform && shared && style_signature(q.keyed_option()) != *shared)
      return flagged(CriterionId::kGrammaticalCues,
                     "keyed option breaks the style shared by every distractor",
                     {option_span(q.answer_index, 0, q.keyed_option().size())});
  }
  return {};
}

DetectorResult unfocused_stem(const Question& q, const DetectorConfig&, const Scorer&) {
  static const std::array<std::string_view, 4> kEndings = {"is true", "is correct", "is false", "applies"};
  static const WordSet kFiller = [] {
    WordSet s;
    for (const char* w : {"statement", "statements", "option", "options", "answer", "answers", "choice",
                          "choices", "one"})
      s.insert(text::stem(w));
    return s;
  }();

  std::string lower = text::to_lower(q.stem);
  const bool generic = strip_phrases(lower, text::lexicons().generic_stems);
  const auto remaining = text::content_words(lower);
  if (remaining.size() < 2)
    return flagged(CriterionId::kUnfocusedStem,
                   "stem has " + std::to_string(remaining.size()) + " content word(s) beyond generic wording");
  if (!generic) return {};

  std::string tail(text::trim(lower));
  while (!tail.empty() && std::ispunct(static_cast<unsigned char>(tail.back()))) tail.pop_back();
  for (const auto ending : kEndings) {
    if (!tail.ends_with(ending)) continue;
    const std::size_t cut = tail.size() - ending.size();
    if (cut > 0 && std::isalnum(static_cast<unsigned char>(tail[cut - 1]))) continue;
    WordSet rest = text::content_words(tail.substr(0, cut));
    for (const auto& f : kFiller) rest.erase(f);
    if (rest.empty())
      return flagged(CriterionId::kUnfocusedStem,
                     "generic stem asking which option " + std::string(ending));
  }
  return {};
}

DetectorResult gratuitous_information(const Question& q, const DetectorConfig&, const Scorer&) {
  std::vector<text::TextSpan> sentences;
  for (const auto& s : text::split_sentences(q.stem))
    if (!text::trim(std::string_view(q.stem).substr(s.begin, s.end - s.begin)).empty()) sentences.push_back(s);
  if (sentences.size() < 2) return {};

  const auto sentence_words = [&](const text::TextSpan& s) {
    return text::content_words(std::string_view(q.stem).substr(s.begin, s.end - s.begin));
  };
  const auto final_words = sentence_words(sentences.back());
  WordSet option_words;
  for (const auto& o : q.options) {
    const auto w = text::content_words(o);
    option_words.insert(w.begin(), w.end());
  }
  for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
    const auto words = sentence_words(sentences[i]);
    const bool linked = std::any_of(words.begin(), words.end(), [&](const std::string& w) {
      return final_words.contains(w) || option_words.contains(w);
    });
    if (!linked)
      return flagged(CriterionId::kGratuitousInformation,
                     "sentence " + std::to_string(i + 1) + " shares no content with the question or options",
                     {stem_span(sentences[i].begin, sentences[i].end)});
  }
  return {};
}

DetectorResult logical_cues(const Question& q, const DetectorConfig& cfg, const Scorer&) {
  const auto repeats = unique_repeats(q);
  auto stem_words = text::content_words(q.stem);
  auto key_words = text::content_words(q.keyed_option());
  for (const auto& w : repeats) {
    stem_words.erase(w);
    key_words.erase(w);
  }
  const double key_sim = text::jaccard(stem_words, key_words);
  double best = 0.0;
  for (std::size_t i = 0; i < q.options.size(); ++i)
    if (i != q.answer_index) best = std::max(best, text::jaccard(stem_words, text::content_words(q.options[i])));
  const double gap = key_sim - best;
  if (!(gap > cfg.cue_margin)) return {};
  return flagged(CriterionId::kLogicalCues,
                 "stem overlaps the keyed option " + fixed2(key_sim) + " vs best distractor " + fixed2(best),
                 {option_span(q.answer_index, 0, q.keyed_option().size())});
}

DetectorResult ambiguous_information(const Question& q, const DetectorConfig& cfg, const Scorer& scorer) {
  const double score = scorer.acceptability(q.stem);
  if (!(score < cfg.ambiguity_threshold)) return {};
  std::string message = "stem acceptability " + fixed2(score) + " below " + fixed2(cfg.ambiguity_threshold);
  const auto reasons = scorer.explain_acceptability(q.stem);
  for (std::size_t i = 0; i < reasons.size(); ++i) message += (i == 0 ? ": " : "; ") + reasons[i];
  return flagged(CriterionId::kAmbiguousInformation, message, {stem_span(0, q.stem.size())});
}

DetectorResult implausible_distractors(const Question& q, const DetectorConfig& cfg, const Scorer& scorer) {
  std::vector<Span> spans;
  std::string message;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    if (i == q.answer_index) continue;
    const double p = scorer.plausibility(q, i);
    if (p < cfg.plausibility_threshold) {
      spans.push_back(option_span(i, 0, q.options[i].size()));
      if (message.empty())
        message = "distractor " + option_label(i) + " plausibility " + fixed2(p) + " below " +
                  fixed2(cfg.plausibility_threshold);
    }
  }
  if (spans.empty()) return {};
  return flagged(CriterionId::kImplausibleDistractors, message, std::move(spans));
}

DetectorResult more_than_one_correct(const Question& q, const DetectorConfig&, const Scorer& scorer) {
  const auto stems = [](std::string_view s) {
    std::vector<std::string> out;
    for (const auto& t : text::tokenize(s))
      if (t.wordlike()) out.push_back(t.stem);
    return out;
  };
  const auto key_stems = stems(q.keyed_option());
  const auto key_norm = normalized_option(q.keyed_option());
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    if (i == q.answer_index) continue;
    if (normalized_option(q.options[i]) == key_norm || (!key_stems.empty() && stems(q.options[i]) == key_stems))
      return flagged(CriterionId::kMoreThanOneCorrect,
                     "option " + option_label(i) + " duplicates the keyed option",
                     {option_span(i, 0, q.options[i].size())});
  }
  const auto guess = scorer.answer(q);
  if (guess.kind == AnswerGuess::Kind::kMultiple)
    return flagged(CriterionId::kMoreThanOneCorrect, "answering model found more than one correct option");
  if (guess.kind == AnswerGuess::Kind::kIndex && guess.index != q.answer_index)
    return flagged(CriterionId::kMoreThanOneCorrect,
                   "answering model chose option " + option_label(guess.index) + " instead of the key");
  return {};
}

Detector detector_for(CriterionId c) {
  switch (c) {
    case CriterionId::kAmbiguousInformation: return ambiguous_information;
    case CriterionId::kImplausibleDistractors: return implausible_distractors;
    case CriterionId::kNoneOfTheAbove: return none_of_the_above;
    case CriterionId::kLongestOptionCorrect: return longest_option_correct;
    case CriterionId::kGratuitousInformation: return gratuitous_information;
    case CriterionId::kTrueFalseQuestion: return true_false_question;
    case CriterionId::kConvergenceCues: return convergence_cues;
    case CriterionId::kLogicalCues: return logical_cues;
    case CriterionId::kAllOfTheAbove: return all_of_the_above;
    case CriterionId::kFillInBlank: return fill_in_blank;
    case CriterionId::kAbsoluteTerms: return absolute_terms;
    case CriterionId::kWordRepeats: return word_repeats;
    case CriterionId::kUnfocusedStem: return unfocused_stem;
    case CriterionId::kComplexKType: return complex_k_type;
    case CriterionId::kGrammaticalCues: return grammatical_cues;
    case CriterionId::kLostSequence: return lost_sequence;
    case CriterionId::kVagueTerms: return vague_terms;
    case CriterionId::kMoreThanOneCorrect: return more_than_one_correct;
    case CriterionId::kNegativeWorded: return negative_worded;
  }
  throw InputError("unknown criterion");
}

}  // namespace detect

FlawReport run_all(const Question& q, const DetectorConfig& cfg, const Scorer& scorer) {
  FlawSet flaws;
  std::vector<Evidence> evidence;
  for (const auto c : all_criteria()) {
    if (!cfg.is_enabled(c)) {
      evidence.push_back({c, "disabled", {}});
      continue;
    }
    auto result = detect::detector_for(c)(q, cfg, scorer);
    if (!result.flag) continue;
    flaws.set(c);
    for (auto& e : result.evidence) evidence.push_back(std::move(e));
  }
  return make_report(q.id, flaws, std::move(evidence), cfg.verdict_threshold);
}

std::vector<FlawReport> run_corpus(std::span<const Question> corpus, const DetectorConfig& cfg,
                                   const Scorer& scorer, unsigned jobs) {
  std::vector<FlawReport> reports(corpus.size());
  text::lexicons();  // load once before fanning out
  if (jobs <= 1 || corpus.size() < 2) {
    for (std::size_t i = 0; i < corpus.size(); ++i) reports[i] = run_all(corpus[i], cfg, scorer);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(corpus.size()));
    for (unsigned w = 0; w < n; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) reports[i] = run_all(corpus[i], cfg, scorer);
      });
    }
  }
  return reports;
}

}  // namespace iwf
