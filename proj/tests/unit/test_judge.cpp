#include <chrono>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "fuzzer.hpp"
#include "httplib.h"
#include "iwf/judge.hpp"
#include "json.hpp"

using namespace iwf;
using namespace iwf::judge;
using namespace std::chrono_literals;

namespace {

/// Fails the first `failures` calls, then answers with `reply`.
class FlakyBackend final : public Backend {
 public:
  FlakyBackend(int failures, std::string reply) : failures_(failures), reply_(std::move(reply)) {}
  std::string complete(const std::string&) override {
    ++calls;
    if (calls <= failures_) throw TransportError("flaky");
    return reply_;
  }
  std::string model() const override { return "flaky"; }
  int calls = 0;

 private:
  int failures_;
  std::string reply_;
};

JudgeOptions only(CriterionId c) {
  JudgeOptions o;
  o.criteria.reset();
  o.criteria.set(index_of(c));
  o.sleep = [](std::chrono::milliseconds) {};
  return o;
}

}  // namespace

TEST_SUITE("judge") {

TEST_CASE("prompt text") {
  const auto q = testing::golden_question();
  CHECK(render_question(q) ==
        "Which gas makes up most of Earth's atmosphere?\nA. Oxygen\nB. Nitrogen (correct)\nC. Carbon dioxide\nD. Argon");
  for (const auto c : all_criteria()) {
    const auto& spec = prompt_spec(c);
    const auto p = build_prompt(q, spec);
    CHECK(p.starts_with("Begin your response with yes or no, does this multiple-choice question satisfy the "
                        "criteria relating to " + spec.display_name + ": "));
    CHECK(p.ends_with(render_question(q)));
    CHECK(criterion_in_prompt(p) == c);
    CHECK(p == testing::read_text(testing::data_dir() / "golden" / "prompts" / (std::string(name_of(c)) + ".txt")));
  }
  CHECK_FALSE(criterion_in_prompt("hello"));
}

TEST_CASE("rubric table parsing") {
  CHECK(prompt_specs().size() == kCriterionCount);
  CHECK_THROWS_AS(parse_prompt_specs("vague_terms\tVague\tdef\n"), InputError);
  CHECK_THROWS_AS(parse_prompt_specs("bogus\tX\tdef\n"), InputError);
  CHECK_THROWS_AS(parse_prompt_specs("vague_terms\tonly two\n"), InputError);
}

TEST_CASE("response parsing") {
  CHECK(parse_response("Yes, it does.").parsed == Judgement::kSatisfied);
  CHECK(parse_response("  NO. Two options are correct").parsed == Judgement::kViolated);
  CHECK(parse_response("no").parsed == Judgement::kViolated);
  CHECK(parse_response("Yesterday it was fine").parsed == Judgement::kIndeterminate);
  CHECK(parse_response("Nope").parsed == Judgement::kIndeterminate);
  CHECK(parse_response("").parsed == Judgement::kIndeterminate);
  CHECK(parse_response("**Yes**").parsed == Judgement::kIndeterminate);
  CHECK(parse_response("No, two options are correct.").explanation == "two options are correct.");
  CHECK(to_string(Judgement::kViolated) == "violated");
}

TEST_CASE("mock endpoints") {
  const auto q = testing::golden_question();
  auto yes = MockBackend::from_endpoint("mock:yes", "m");
  auto no = MockBackend::from_endpoint("mock:no=vague_terms", "m");
  CHECK(parse_response(yes->complete(build_prompt(q, prompt_spec(CriterionId::kVagueTerms)))).parsed ==
        Judgement::kSatisfied);
  CHECK(parse_response(no->complete(build_prompt(q, prompt_spec(CriterionId::kVagueTerms)))).parsed ==
        Judgement::kViolated);
  CHECK(parse_response(no->complete(build_prompt(q, prompt_spec(CriterionId::kAbsoluteTerms)))).parsed ==
        Judgement::kSatisfied);
  CHECK(no->calls() == 2);
  CHECK_THROWS_AS(MockBackend::from_endpoint("mock:maybe", "m"), InputError);
  CHECK_THROWS_AS(MockBackend::from_endpoint("mock:yes;oops", "m"), InputError);
  CHECK_THROWS_AS(MockBackend::from_endpoint("http://x", "m"), InputError);
  auto failing = MockBackend::from_endpoint("mock:yes;fail=Argon", "m");
  CHECK_THROWS_AS(failing->complete(build_prompt(q, prompt_spec(CriterionId::kVagueTerms))), TransportError);
}

TEST_CASE("yes and no map to flaws") {
  const auto q = testing::golden_question();
  JudgeOptions opts;
  auto mock = MockBackend::from_endpoint("mock:no=fill_in_blank,vague_terms", "m");
  const auto j = judge_question(q, *mock, opts);
  CHECK(j.flaws.count() == 2);
  CHECK(j.flaws[CriterionId::kFillInBlank]);
  CHECK(j.flaws[CriterionId::kVagueTerms]);
  CHECK(j.complete());
  CHECK(mock->calls() == kCriterionCount);
  for (const auto& o : j.outcomes) {
    CHECK(o.judged);
    CHECK(o.attempts == 1);
    CHECK(o.prompt_sha256 == sha256_hex(build_prompt(q, prompt_spec(o.criterion))));
  }
}

TEST_CASE("indeterminate policies") {
  const auto q = testing::golden_question();
  for (const auto& [policy, flaw, calls] : {std::tuple{IndeterminatePolicy::kFlaw, true, 1},
                                           std::tuple{IndeterminatePolicy::kNoFlaw, false, 1},
                                           std::tuple{IndeterminatePolicy::kRetryOnce, false, 2}}) {
    auto opts = only(CriterionId::kVagueTerms);
    opts.policy = policy;
    auto mock = MockBackend::from_endpoint("mock:unclear", "m");
    const auto j = judge_question(q, *mock, opts);
    const auto& o = j.outcomes[index_of(CriterionId::kVagueTerms)];
    CHECK(o.indeterminate);
    CHECK(o.flaw == flaw);
    CHECK(o.attempts == calls);
    CHECK(mock->calls() == static_cast<std::size_t>(calls));
    CHECK(j.complete());
  }
  CHECK(policy_from_name("retry") == IndeterminatePolicy::kRetryOnce);
  CHECK_FALSE(policy_from_name("maybe"));
}

TEST_CASE("transport retries with doubling backoff") {
  const auto q = testing::golden_question();
  auto opts = only(CriterionId::kVagueTerms);
  std::vector<std::chrono::milliseconds> sleeps;
  opts.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };

  FlakyBackend recovers(2, "No.");
  const auto ok = judge_question(q, recovers, opts);
  const auto& o = ok.outcomes[index_of(CriterionId::kVagueTerms)];
  CHECK(o.attempts == 3);
  CHECK(o.flaw);
  CHECK_FALSE(o.error);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{500ms, 1000ms});

  sleeps.clear();
  FlakyBackend dead(10, "No.");
  const auto bad = judge_question(q, dead, opts);
  CHECK(dead.calls == 3);
  CHECK_FALSE(bad.complete());
  CHECK(bad.outcomes[index_of(CriterionId::kVagueTerms)].error);
  CHECK_FALSE(bad.flaws[CriterionId::kVagueTerms]);
  CHECK(sleeps.size() == 2);
}

TEST_CASE("cache") {
  testing::TempDir dir("cache");
  const ResponseCache cache(dir.path());
  CHECK_FALSE(cache.get("p", "m"));
  cache.put("p", "m", "Yes.");
  CHECK(cache.get("p", "m") == "Yes.");
  CHECK_FALSE(cache.get("p", "other"));
  CHECK(cache.size() == 1);
  CHECK(cache.path_for("p", "m").filename().string().starts_with(sha256_hex("p")));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  const auto corpus = testing::QuestionFuzzer(3).batch(5);
  JudgeOptions opts;
  opts.cache = &cache;
  auto first = MockBackend::from_endpoint("mock:no=vague_terms", "m");
  const auto a = judge_corpus(corpus, *first, opts);
  auto second = MockBackend::from_endpoint("mock:no=vague_terms", "m");
  const auto b = judge_corpus(corpus, *second, opts);
  CHECK(second->calls() == 0);
  CHECK(b.backend_calls == 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(a.matrix[i].flaws == b.matrix[i].flaws);
  CHECK(b.questions[0].outcomes[0].cached);
}

TEST_CASE("concurrency does not change results") {
  const auto corpus = testing::QuestionFuzzer(11).batch(12);
  const auto responder = [](const std::string& prompt) {
    const auto h = std::hash<std::string>{}(prompt);
    std::this_thread::sleep_for(std::chrono::microseconds(h % 2000));
    return h % 3 == 0 ? std::string("No, it fails.") : std::string("Yes.");
  };
  MockBackend serial("m", responder), parallel("m", responder);
  JudgeOptions opts;
  const auto a = judge_corpus(corpus, serial, opts);
  opts.concurrency = 8;
  const auto b = judge_corpus(corpus, parallel, opts);
  REQUIRE(a.matrix.size() == b.matrix.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(b.matrix[i].id == corpus[i].id);
    CHECK(a.matrix[i].flaws == b.matrix[i].flaws);
  }
  CHECK(serial.calls() == parallel.calls());
}

TEST_CASE("backend config") {
  BackendConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.endpoint = "http://localhost:1/v1";
  cfg.model = "m";
  CHECK_NOTHROW(cfg.validate());
  cfg.max_concurrency = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  BackendConfig ftp{"ftp://host/x", "m"};
  CHECK_THROWS_AS(HttpBackend(ftp, ""), InputError);
}

TEST_CASE("http payloads") {
  const auto body = nlohmann::json::parse(HttpBackend::request_body("gpt", "Hi \"there\""));
  CHECK(body["model"] == "gpt");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "Hi \"there\"");
  CHECK(HttpBackend::extract_content(R"({"choices":[{"message":{"content":"Yes."}}]})") == "Yes.");
  CHECK_THROWS_AS(HttpBackend::extract_content("not json"), TransportError);
  CHECK_THROWS_AS(HttpBackend::extract_content(R"({"choices":[]})"), TransportError);
}

TEST_CASE("http backend against a local server") {
  httplib::Server server;
  std::mutex mu;
  std::string auth, last_prompt;
  int hits = 0;
  server.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu);
    ++hits;
    auth = req.get_header_value("Authorization");
    last_prompt = nlohmann::json::parse(req.body)["messages"][0]["content"];
    if (hits == 1) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"No, vague."}}]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  BackendConfig cfg{"http://127.0.0.1:" + std::to_string(port) + "/v1/chat", "m", 5000ms};
  HttpBackend backend(cfg, "secret");
  auto opts = only(CriterionId::kVagueTerms);
  const auto q = testing::golden_question();
  const auto j = judge_question(q, backend, opts);
  server.stop();
  t.join();

  const auto& o = j.outcomes[index_of(CriterionId::kVagueTerms)];
  CHECK(o.attempts == 2);
  CHECK(o.flaw);
  CHECK(auth == "Bearer secret");
  CHECK(last_prompt == build_prompt(q, prompt_spec(CriterionId::kVagueTerms)));

  BackendConfig closed{"http://127.0.0.1:" + std::to_string(port) + "/v1/chat", "m", 500ms};
  HttpBackend down(closed, "");
  CHECK_THROWS_AS(down.complete("x"), TransportError);
}

}
