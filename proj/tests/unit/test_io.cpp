#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "iwf/detectors.hpp"
#include "iwf/io.hpp"
#include "json.hpp"

using namespace iwf;
using namespace iwf::io;

namespace {

std::vector<std::string> load_errors(std::string_view content) {
  try {
    parse_corpus(content);
  } catch (const LoadError& e) {
    return e.errors();
  }
  return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("corpus parsing") {
  const auto corpus = load_corpus(testing::data_dir() / "fixture_corpus.jsonl");
  REQUIRE(corpus.size() == 4);
  CHECK(corpus[0].id == "bio-1");
  CHECK(corpus[0].domain == "biology");
  CHECK(corpus[3].options.size() == 2);

  const auto crlf = parse_corpus("\xEF\xBB\xBF{\"id\":\"a\",\"stem\":\"S?\",\"options\":[\"x\",\"y\"],\"answer_index\":0}\r\n\r\n");
  REQUIRE(crlf.size() == 1);
  CHECK(crlf[0].id == "a");
}

TEST_CASE("corpus errors name every bad line") {
  const auto errors = load_errors(
      "{\"id\":\"a\",\"stem\":\"S?\",\"options\":[\"x\",\"y\"],\"answer_index\":0}\n"
      "not json\n"
      "{\"id\":\"b\",\"options\":[\"x\",\"y\"],\"answer_index\":0}\n"
      "{\"id\":\"a\",\"stem\":\"S?\",\"options\":[\"x\",\"y\"],\"answer_index\":0}\n"
      "{\"id\":\"c\",\"stem\":\"S?\",\"options\":[\"x\"],\"answer_index\":4}\n"
      "[1]\n");
  REQUIRE(errors.size() == 6);
  CHECK(errors[0].starts_with("line 2: malformed JSON"));
  CHECK(errors[1] == "line 3: missing \"stem\"");
  CHECK(errors[2] == "line 4: duplicate id \"a\" (also on line 1)");
  CHECK(errors[3] == "line 5: question \"c\": fewer than 2 options");
  CHECK(errors[4] == "line 5: question \"c\": answer_index out of range");
  CHECK(errors[5] == "line 6: expected a JSON object");
  CHECK(load_errors("{\"id\":\"a\",\"stem\":\"S?\",\"options\":[\"x\",2],\"answer_index\":0}")[0] ==
        "line 1: \"options\" must be an array of strings");
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), FileError);
}

TEST_CASE("labels round-trip") {
  LabelMatrix m(LabelSource::kLlm);
  LabelRow a{"a", {}, "bio", true};
  a.flaws.set(CriterionId::kVagueTerms);
  a.flaws.set(CriterionId::kAbsoluteTerms);
  m.add(a);
  m.add({"b", {}, std::nullopt, false});
  const auto text = emit_labels(m);
  CHECK(text ==
        "{\"id\":\"a\",\"domain\":\"bio\",\"flaws\":[\"absolute_terms\",\"vague_terms\"]}\n"
        "{\"id\":\"b\",\"flaws\":[],\"complete\":false}\n");
  const auto back = parse_labels(text, LabelSource::kLlm);
  REQUIRE(back.size() == 2);
  CHECK(back[0].flaws == a.flaws);
  CHECK(back[0].domain == "bio");
  CHECK_FALSE(back[1].complete);
  CHECK(emit_labels(back) == text);
  CHECK(parse_labels("{\"id\":\"x\"}\n")[0].flaws.none());
}

TEST_CASE("label errors") {
  try {
    parse_labels("{\"id\":\"x\",\"flaws\":[\"bogus\"]}\n{\"flaws\":[]}\n{\"id\":\"y\",\"complete\":1}\n");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    REQUIRE(e.errors().size() == 3);
    CHECK(e.errors()[0] == "line 1: unknown criterion \"bogus\"");
    CHECK(e.errors()[1] == "line 2: missing \"id\"");
    CHECK(e.errors()[2] == "line 3: \"complete\" must be a boolean");
  }
}

TEST_CASE("report formats") {
  const auto corpus = load_corpus(testing::data_dir() / "fixture_corpus.jsonl");
  const auto reports = run_corpus(corpus, DetectorConfig{}, HeuristicScorer{}, 1);

  const auto doc = nlohmann::json::parse(emit_report(reports, ReportFormat::kJson));
  REQUIRE(doc.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(doc[i]["id"] == corpus[i].id);
    CHECK(doc[i]["flaw_count"] == reports[i].flaw_count);
    CHECK(doc[i]["flaws"].size() >= static_cast<std::size_t>(reports[i].flaw_count));
  }
  CHECK(emit_report({}, ReportFormat::kJson) == "[]\n");

  const auto tsv = emit_report(reports, ReportFormat::kTsv);
  const auto header = tsv.substr(0, tsv.find('\n'));
  CHECK(std::count(header.begin(), header.end(), '\t') == 21);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 5);

  const auto table = emit_report(reports, ReportFormat::kTable);
  CHECK(table.find("bio-2") != std::string::npos);

  const auto line = emit_lint_summary(reports, ReportFormat::kTable);
  CHECK(line.starts_with("summary: 4 questions"));
  const auto summary = nlohmann::json::parse(emit_lint_summary(reports, ReportFormat::kJson));
  CHECK(summary.is_object());
}

TEST_CASE("atomic writes") {
  testing::TempDir dir("io");
  const auto p = dir / "out.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(read_file(p) == "two");
  CHECK(std::distance(std::filesystem::directory_iterator(dir.path()), {}) == 1);
  CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "x.txt", "x"), FileError);
}

}
