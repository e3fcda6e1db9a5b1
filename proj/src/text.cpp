#include "iwf/text.hpp"

#include <algorithm>
#include <limits>

#include "iwf/core.hpp"
#include "iwf/resources.hpp"

namespace iwf::text {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || is_upper(c); }
bool is_word_char(char c) {
  return is_alpha(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

bool numeric_surface(std::string_view s) {
  if (s.empty() || !is_digit(s.front()) || !is_digit(s.back())) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return is_digit(c) || c == '.' || c == ','; });
}

std::string alnum_concat(const std::vector<Token>& tokens, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last; ++i)
    for (char c : tokens[i].normal)
      if (is_word_char(c)) out.push_back(c);
  return out;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    if (is_word_char(text[i])) {
      bool all_digits = true;
      while (i < n) {
        if (is_word_char(text[i])) {
          all_digits = all_digits && is_digit(text[i]);
          ++i;
        } else if ((text[i] == '\'' || text[i] == '-') && i + 1 < n && is_word_char(text[i + 1])) {
          all_digits = false;
          ++i;
        } else if ((text[i] == '.' || text[i] == ',') && all_digits && i + 1 < n &&
                   is_digit(text[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
    } else {
      ++i;
    }
    Token t;
    t.surface = std::string(text.substr(begin, i - begin));
    t.normal = to_lower(t.surface);
    t.begin = begin;
    t.end = i;
    if (!is_word_char(t.surface.front())) {
      t.cls = TokenClass::kPunct;
      t.stem = t.normal;
    } else if (numeric_surface(t.surface)) {
      t.cls = TokenClass::kNumber;
      t.stem = t.normal;
    } else {
      t.cls = TokenClass::kWord;
      t.stem = stem(t.normal);
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<TextSpan> split_sentences(std::string_view text) {
  std::vector<TextSpan> spans;
  const std::size_t n = text.size();
  if (n == 0) return spans;
  const auto& abbreviations = lexicons().abbreviations;

  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?' || text[j] == '"' ||
                     text[j] == '\'' || text[j] == ')' || text[j] == ']'))
      ++j;
    if (j >= n || !is_space(text[j])) {
      i = j - 1;
      continue;
    }
    std::size_t k = j;
    while (k < n && is_space(text[k])) ++k;
    if (k >= n || !(is_upper(text[k]) || is_digit(text[k]))) {
      i = j - 1;
      continue;
    }
    if (c == '.' && j == i + 1) {
      std::size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      if (abbreviations.contains(to_lower(text.substr(w, i + 1 - w)))) continue;
    }
    spans.push_back({start, k});
    start = k;
    i = k - 1;
  }
  spans.push_back({start, n});
  return spans;
}

bool is_stopword(std::string_view normal) { return lexicons().stopwords.contains(normal); }

WordSet content_words(std::string_view text) {
  WordSet out;
  for (const auto& t : tokenize(text))
    if (t.wordlike() && !is_stopword(t.normal)) out.insert(t.stem);
  return out;
}

double jaccard(const WordSet& a, const WordSet& b) {
  std::size_t common = 0;
  for (const auto& w : a) common += b.contains(w) ? 1 : 0;
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

double overlap_similarity(std::string_view a, std::string_view b) {
  return jaccard(content_words(a), content_words(b));
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

FuzzyMatch fuzzy_contains(std::string_view text, std::string_view phrase, int max_edits) {
  if (max_edits < 0) throw InputError("max_edits must be >= 0");
  const auto tokens = tokenize(text);
  const auto target = tokenize(phrase);
  if (target.empty() || tokens.empty()) return {};
  const std::string target_concat = alnum_concat(target, 0, target.size());
  const std::size_t m = target.size();
  const std::size_t min_w = m > 2 ? m - 2 : 1;
  const std::size_t max_w = std::min(tokens.size(), m + 2);

  FuzzyMatch best;
  int best_cost = std::numeric_limits<int>::max();
  for (std::size_t first = 0; first < tokens.size(); ++first) {
    for (std::size_t w = min_w; w <= max_w && first + w <= tokens.size(); ++w) {
      int cost = 0;
      bool exact = (w == m);
      for (std::size_t t = 0; exact && t < m; ++t) exact = tokens[first + t].normal == target[t].normal;
      if (!exact) {
        const std::string concat = alnum_concat(tokens, first, first + w);
        const auto diff = concat.size() > target_concat.size() ? concat.size() - target_concat.size()
                                                               : target_concat.size() - concat.size();
        if (diff > static_cast<std::size_t>(max_edits)) continue;
        cost = std::max<int>(1, static_cast<int>(edit_distance(concat, target_concat)));
      }
      if (cost <= max_edits && cost < best_cost) {
        best_cost = cost;
        best = {true, tokens[first].begin, tokens[first + w - 1].end, cost};
      }
    }
  }
  return best;
}

std::size_t codepoint_count(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

Lexicon Lexicon::parse(std::string name, std::string_view content) {
  Lexicon lex;
  lex.name = std::move(name);
  while (!content.empty()) {
    const auto nl = content.find('\n');
    const auto line = trim(content.substr(0, nl));
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    if (to_lower(line) != line)
      throw InputError("lexicon " + lex.name + ": entry \"" + std::string(line) + "\" is not lowercase");
    lex.entries.emplace(line);
  }
  if (lex.entries.empty()) throw InputError("lexicon " + lex.name + " is empty");
  return lex;
}

Lexicons Lexicons::load(const std::optional<std::filesystem::path>& override) {
  auto get = [&](const char* name) {
    return Lexicon::parse(name, resources::load(std::string(name) + ".txt", override));
  };
  return Lexicons{
      get("stopwords"),      get("abbreviations"),  get("absolute_terms"),
      get("vague_terms"),    get("negative_terms"), get("none_of_the_above"),
      get("all_of_the_above"), get("generic_stems"), get("verbs"),
      get("pronouns"),
  };
}

const Lexicons& lexicons() {
  static const Lexicons kLexicons = Lexicons::load(resources::override_dir());
  return kLexicons;
}

}  // namespace iwf::text
