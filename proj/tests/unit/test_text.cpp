#include "doctest.h"
#include "fixtures.hpp"
#include "iwf/resources.hpp"
#include "iwf/text.hpp"

using namespace iwf;
using namespace iwf::text;

TEST_SUITE("text") {

TEST_CASE("tokenizer classes and offsets") {
  const std::string s = "Don't heat 3.2 g of H2O, forty-two times!";
  const auto t = tokenize(s);
  std::vector<std::string> surfaces;
  for (const auto& tok : t) {
    surfaces.push_back(tok.surface);
    CHECK(s.substr(tok.begin, tok.end - tok.begin) == tok.surface);
  }
  CHECK(surfaces == std::vector<std::string>{"Don't", "heat", "3.2", "g", "of", "H2O", ",", "forty-two", "times", "!"});
  CHECK(t[0].normal == "don't");
  CHECK(t[2].cls == TokenClass::kNumber);
  CHECK(t[5].cls == TokenClass::kWord);
  CHECK(t[6].cls == TokenClass::kPunct);
  CHECK(tokenize("1,000 cells")[0].surface == "1,000");
}

TEST_CASE("sentence splitting covers the text") {
  const std::string s = "Dr. Smith arrived. He sat down! Was it 5 p.m.? Yes.";
  const auto spans = split_sentences(s);
  REQUIRE(spans.size() == 4);
  CHECK(spans.front().begin == 0);
  CHECK(spans.back().end == s.size());
  for (std::size_t i = 1; i < spans.size(); ++i) CHECK(spans[i].begin == spans[i - 1].end);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("no terminal punctuation").size() == 1);
}

TEST_CASE("stemmer") {
  CHECK(stem("cats") == "cat");
  CHECK(stem("boxes") == "box");
  CHECK(stem("running") == "run");
  CHECK(stem("hopped") == "hop");
  CHECK(stem("quickly") == "quick");
  CHECK(stem("glass") == "glass");
  CHECK(stem("dog's") == "dog");
  CHECK(stem("the") == "the");
  CHECK(stem("studies") == stem("study"));
  CHECK(stem("connected") == stem("connecting"));
}

TEST_CASE("content words skip stopwords") {
  const auto w = content_words("The cells of the membranes");
  CHECK(w == WordSet{"cell", "membran"});
  CHECK(jaccard({}, {}) == 0.0);
  CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("numeric options") {
  auto n = parse_numeric("42");
  REQUIRE(n);
  CHECK(n->value == 42.0);
  CHECK(parse_numeric("-3.5 mol"));
  CHECK(parse_numeric("$1,200"));
  CHECK(parse_numeric("25%"));
  CHECK(parse_numeric("1/2"));
  const auto d = parse_numeric("1945");
  REQUIRE(d);
  CHECK(d->kind == Numeric::Kind::kDate);
  const auto md = parse_numeric("March 1969");
  REQUIRE(md);
  CHECK(md->kind == Numeric::Kind::kDate);
  CHECK(md->value == doctest::Approx(1969 + 2.0 / 12));
  CHECK_FALSE(parse_numeric("seven apples and pears"));
  CHECK_FALSE(parse_numeric("Nitrogen"));
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("same", "same") == 0);
}

TEST_CASE("fuzzy phrase search") {
  const auto exact = fuzzy_contains("Pick None of the above here", "none of the above", 2);
  CHECK(exact.found);
  CHECK(exact.edits == 0);
  CHECK(exact.begin == 5);
  CHECK(exact.end == 22);
  const auto typo = fuzzy_contains("none of the abve", "none of the above", 2);
  CHECK(typo.found);
  CHECK(typo.edits == 1);
  CHECK_FALSE(fuzzy_contains("none of the above", "all of the above", 2).found);
  CHECK_FALSE(fuzzy_contains("none of the abve", "none of the above", 0).found);
  CHECK_THROWS_AS(fuzzy_contains("x", "x", -1), InputError);
  // a spacing change costs at least one edit
  CHECK(fuzzy_contains("noneofthe above", "none of the above", 2).edits >= 1);
}

TEST_CASE("codepoints") {
  CHECK(codepoint_count("abc") == 3);
  CHECK(codepoint_count("\xc3\xa9t\xc3\xa9") == 3);
}

TEST_CASE("lexicons") {
  const auto& lx = lexicons();
  CHECK(lx.stopwords.contains("the"));
  CHECK(lx.absolute_terms.contains("never"));
  CHECK(lx.vague_terms.contains("frequently"));
  CHECK_THROWS_AS(Lexicon::parse("x", "# only a comment\n\n"), InputError);
  CHECK_THROWS_AS(Lexicon::parse("x", "Upper\n"), InputError);
  CHECK(Lexicon::parse("x", "a\n# c\nb c\n").entries.size() == 2);
}

TEST_CASE("resource override directory") {
  testing::TempDir dir("lex");
  testing::write_text(dir / "vague_terms.txt", "zzword\n");
  CHECK(resources::load("vague_terms.txt", dir.path()) == "zzword\n");
  const auto lx = Lexicons::load(dir.path());
  CHECK(lx.vague_terms.contains("zzword"));
  CHECK_FALSE(lx.vague_terms.contains("frequently"));
  CHECK(lx.absolute_terms.contains("never"));
  CHECK_THROWS_AS(resources::load("missing.txt", std::nullopt), InputError);
}

}
