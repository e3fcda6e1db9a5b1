// Suffix-stripping stemmer. Rules run in order; each step applies at most
// one rule. Words of three characters or fewer, and words that keep an
// apostrophe after possessive removal, are returned unchanged.
//
//   possessive   's -> ''        ' -> ''
//   plural       sses -> ss      ies -> i        (s|x|z|ch|sh)es -> drop es
//                ss, us, is kept                 s -> ''
//   past/gerund  eed -> ee       ed -> ''        ing -> ''   (stem needs a vowel)
//                then: at/bl/iz -> +e, doubled consonant other than l/s/z -> single
//   adverb       ly -> ''        (not after i; stem of four or more)
//   derivation   ational -> ate  tional -> tion  ization -> ize
//                ation -> ate    ator -> ate     iveness -> ive
//                fulness -> ful  ousness -> ous  ness -> ''
//   final y      y -> i          (stem needs a vowel)
//   final e      e -> ''         (words longer than four)

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "iwf/text.hpp"

namespace iwf::text {
namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  for (char c : s)
    if (is_vowel(c)) return true;
  return false;
}

bool ends_with(const std::string& s, std::string_view suffix) { return s.ends_with(suffix); }

void drop(std::string& s, std::size_t n) { s.erase(s.size() - n); }

void plural(std::string& s) {
  if (ends_with(s, "sses")) {
    drop(s, 2);
  } else if (ends_with(s, "ies")) {
    drop(s, 2);
  } else if (ends_with(s, "ses") || ends_with(s, "xes") || ends_with(s, "zes") ||
             ends_with(s, "ches") || ends_with(s, "shes")) {
    if (s.size() - 2 >= 3) drop(s, 2);
  } else if (ends_with(s, "ss") || ends_with(s, "us") || ends_with(s, "is")) {
    // singular
  } else if (ends_with(s, "s") && s.size() - 1 >= 3) {
    drop(s, 1);
  }
}

void past_or_gerund(std::string& s) {
  if (ends_with(s, "eed")) {
    if (s.size() > 4) drop(s, 1);
    return;
  }
  std::size_t cut = 0;
  if (ends_with(s, "ed")) {
    cut = 2;
  } else if (ends_with(s, "ing")) {
    cut = 3;
  } else {
    return;
  }
  const std::string_view base(s.data(), s.size() - cut);
  if (base.size() < 3 || !has_vowel(base)) return;
  drop(s, cut);
  if (ends_with(s, "at") || ends_with(s, "bl") || ends_with(s, "iz")) {
    s.push_back('e');
  } else if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2] && !is_vowel(s.back()) &&
             s.back() != 'l' && s.back() != 's' && s.back() != 'z') {
    s.pop_back();
  }
}

void adverb(std::string& s) {
  if (ends_with(s, "ly") && s.size() - 2 >= 4 && s[s.size() - 3] != 'i') drop(s, 2);
}

void derivation(std::string& s) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kRules{{
      {"ational", "ate"},
      {"tional", "tion"},
      {"ization", "ize"},
      {"ation", "ate"},
      {"ator", "ate"},
      {"iveness", "ive"},
      {"fulness", "ful"},
      {"ousness", "ous"},
  }};
  for (const auto& [suffix, replacement] : kRules) {
    if (ends_with(s, suffix) && s.size() - suffix.size() >= 2) {
      drop(s, suffix.size());
      s.append(replacement);
      return;
    }
  }
  if (ends_with(s, "ness") && s.size() - 4 >= 4) drop(s, 4);
}

void final_y(std::string& s) {
  if (s.size() > 2 && s.back() == 'y' && has_vowel(std::string_view(s.data(), s.size() - 1)))
    s.back() = 'i';
}

void final_e(std::string& s) {
  if (s.size() > 4 && s.back() == 'e') s.pop_back();
}

}  // namespace

std::string stem(std::string_view word) {
  std::string s(word);
  if (s.ends_with("'s")) {
    drop(s, 2);
  } else if (s.ends_with('\'')) {
    drop(s, 1);
  }
  if (s.size() <= 3 || s.find('\'') != std::string::npos) return s;
  plural(s);
  past_or_gerund(s);
  adverb(s);
  derivation(s);
  final_y(s);
  final_e(s);
  return s;
}

}  // namespace iwf::text
