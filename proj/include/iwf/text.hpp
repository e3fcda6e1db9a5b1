#pragma once

// Deterministic text primitives shared by the detectors. Everything here is
// ASCII-aware only: bytes >= 0x80 are treated as word characters and are
// never case-folded.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace iwf::text {

enum class TokenClass { kWord, kNumber, kPunct };

struct Token {
  std::string surface;
  std::string normal;  // ASCII lowercase of surface
  std::string stem;    // stemmed normal form; equals normal for non-words
  std::size_t begin = 0;
  std::size_t end = 0;
  TokenClass cls = TokenClass::kWord;

  bool wordlike() const { return cls != TokenClass::kPunct; }
};

/// Splits text into word, number and single-character punctuation tokens.
///
/// A word starts at an ASCII letter/digit (or any byte >= 0x80) and runs
/// over such characters; an apostrophe or hyphen between two word
/// characters is kept inside the token ("don't", "forty-two"). A digit run
/// may absorb "." or "," followed by digits ("3.2", "1,000"). Tokens that
/// consist only of digits and such separators are numbers; "H2O" is a word.
std::vector<Token> tokenize(std::string_view text);

struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

/// Contiguous spans covering the whole text. A sentence ends after [.!?]
/// (plus closing quotes/brackets) when whitespace and an uppercase letter
/// or digit follow, unless the period closes an abbreviation.
std::vector<TextSpan> split_sentences(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Suffix-stripping stemmer over a lowercase word. See README for the rule
/// table.
std::string stem(std::string_view word);

using WordSet = std::set<std::string>;

bool is_stopword(std::string_view normal);

/// Stems of the word and number tokens that are not stopwords.
WordSet content_words(std::string_view text);

/// |a ∩ b| / |a ∪ b|, defined as 0 when both are empty.
double jaccard(const WordSet& a, const WordSet& b);
double overlap_similarity(std::string_view a, std::string_view b);

struct Numeric {
  enum class Kind { kNumber, kDate };
  Kind kind = Kind::kNumber;
  double value = 0.0;  // dates: year + (month - 1) / 12
};

/// Reads an option that is predominantly one quantity: an optional sign or
/// "$", a number or simple fraction, then at most a "%" or a short unit
/// ("5 mol", "3 m/s"). A bare 4-digit integer in [1000, 2999], or a month
/// name followed by one, is a date. Anything else yields nullopt.
std::optional<Numeric> parse_numeric(std::string_view option_text);

std::size_t edit_distance(std::string_view a, std::string_view b);

struct FuzzyMatch {
  bool found = false;
  std::size_t begin = 0;
  std::size_t end = 0;
  int edits = 0;
};

/// Looks for a run of consecutive tokens in `text` close to `phrase`.
///
/// A window whose lowercase tokens equal the phrase tokens costs 0. Any
/// other window costs the character edit distance between the
/// alphanumeric concatenations of both sides, and at least 1. The cheapest
/// window within `max_edits` wins, earliest first. Throws InputError for a
/// negative budget.
FuzzyMatch fuzzy_contains(std::string_view text, std::string_view phrase, int max_edits);

/// Number of UTF-8 code points.
std::size_t codepoint_count(std::string_view s);

/// A named word list; multi-word entries are phrases.
struct Lexicon {
  std::string name;
  std::set<std::string> entries;

  bool contains(std::string_view word) const { return entries.contains(std::string(word)); }

  /// Parses a word-per-line file. Blank lines and '#' comments are skipped.
  /// Throws InputError on an empty list or a non-lowercase entry.
  static Lexicon parse(std::string name, std::string_view content);
};

struct Lexicons {
  Lexicon stopwords;
  Lexicon abbreviations;
  Lexicon absolute_terms;
  Lexicon vague_terms;
  Lexicon negative_terms;
  Lexicon none_of_the_above;
  Lexicon all_of_the_above;
  Lexicon generic_stems;
  Lexicon verbs;
  Lexicon pronouns;

  /// Loads every list, preferring files in `override` over embedded ones.
  static Lexicons load(const std::optional<std::filesystem::path>& override);
};

/// Process-wide lexicons, loaded on first use (honours IWF_LEXICON_DIR).
const Lexicons& lexicons();

}  // namespace iwf::text
