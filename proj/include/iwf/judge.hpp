#pragma once

#include <atomic>
#include <bitset>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iwf/core.hpp"

namespace iwf::judge {

/// Rubric wording sent to the model for one criterion.
struct CriterionPromptSpec {
  CriterionId criterion{};
  std::string display_name;
  std::string definition;
};

/// Parses the tab-separated rubric table (id, display name, definition).
/// Throws InputError unless all 19 criteria appear exactly once.
std::vector<CriterionPromptSpec> parse_prompt_specs(std::string_view tsv);

/// The frozen rubric table in canonical criterion order.
std::span<const CriterionPromptSpec> prompt_specs();
const CriterionPromptSpec& prompt_spec(CriterionId c);

/// Stem, then one "X. option" line per option; the keyed option gets a
/// trailing " (correct)". No trailing newline.
std::string render_question(const Question& q);

/// "Begin your response with yes or no, does this multiple-choice question
/// satisfy the criteria relating to {name}: {definition}? Explain why.
/// {question}"
std::string build_prompt(const Question& q, const CriterionPromptSpec& spec);

enum class Judgement { kSatisfied, kViolated, kIndeterminate };

std::string_view to_string(Judgement j);

struct JudgeResponse {
  std::string raw;
  Judgement parsed = Judgement::kIndeterminate;
  std::string explanation;
};

/// Satisfied when the first word (after leading whitespace, any case) is
/// "yes", violated when it is "no", indeterminate otherwise.
JudgeResponse parse_response(std::string_view raw);

/// A request that did not produce a response (network, HTTP status,
/// malformed payload). Retried by the judge.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text-completion endpoint. complete() may be called from several threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string model() const = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};  // doubles after each failure
};

struct BackendConfig {
  std::string endpoint;
  std::string model;
  std::chrono::milliseconds timeout{60000};
  unsigned max_concurrency = 4;
  RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;

  /// Throws InputError when concurrency or attempts are below 1.
  void validate() const;
};

/// Chat-completions style HTTP backend: POSTs {model, messages:[{role:
/// "user", content}]} with a bearer token and reads
/// choices[0].message.content.
class HttpBackend final : public Backend {
 public:
  HttpBackend(BackendConfig config, std::string api_key);

  std::string complete(const std::string& prompt) override;
  std::string model() const override { return config_.model; }

  /// The JSON body sent for a prompt.
  static std::string request_body(std::string_view model, std::string_view prompt);
  /// Extracts the first choice's message content; throws TransportError.
  static std::string extract_content(std::string_view response_body);

 private:
  BackendConfig config_;
  std::string api_key_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

/// Deterministic in-process backend for tests and dry runs.
class MockBackend final : public Backend {
 public:
  using Responder = std::function<std::string(const std::string& prompt)>;

  MockBackend(std::string model, Responder responder)
      : model_(std::move(model)), responder_(std::move(responder)) {}

  /// Builds a mock from an endpoint of the form
  ///   mock:yes | mock:no | mock:no=<criterion,...> | mock:unclear
  /// optionally followed by ";fail=<text>" to fail every prompt containing
  /// <text>. Throws InputError on other forms.
  static std::unique_ptr<MockBackend> from_endpoint(std::string_view endpoint, std::string model);
  static bool is_mock_endpoint(std::string_view endpoint) { return endpoint.starts_with("mock:"); }

  std::string complete(const std::string& prompt) override;
  std::string model() const override { return model_; }
  std::size_t calls() const { return calls_.load(); }

 private:
  std::string model_;
  Responder responder_;
  std::atomic<std::size_t> calls_{0};
};

/// Criterion named in a prompt built by build_prompt, if recognisable.
std::optional<CriterionId> criterion_in_prompt(std::string_view prompt);

/// Responses stored as one JSON file per (prompt hash, model) under a
/// directory. Writes go through a temporary file and a rename, so
/// concurrent writers of distinct keys never interfere.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(std::string_view prompt, std::string_view model) const;
  void put(std::string_view prompt, std::string_view model, std::string_view raw) const;
  std::filesystem::path path_for(std::string_view prompt, std::string_view model) const;
  std::size_t size() const;

 private:
  std::filesystem::path dir_;
};

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// What to record when a reply starts with neither yes nor no.
enum class IndeterminatePolicy {
  kFlaw,
  kNoFlaw,
  kRetryOnce,  // ask again once; if still unclear, no flaw plus an audit mark
};

std::optional<IndeterminatePolicy> policy_from_name(std::string_view name);

struct JudgeOptions {
  IndeterminatePolicy policy = IndeterminatePolicy::kRetryOnce;
  RetryPolicy retry;
  unsigned concurrency = 1;
  std::bitset<kCriterionCount> criteria = std::bitset<kCriterionCount>().set();
  const ResponseCache* cache = nullptr;
  std::span<const CriterionPromptSpec> prompts = prompt_specs();
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for
};

struct CriterionOutcome {
  CriterionId criterion{};
  bool judged = false;  // false when excluded from the run
  std::optional<JudgeResponse> response;
  bool flaw = false;
  bool indeterminate = false;  // reply stayed unclear; recorded per policy
  bool cached = false;
  int attempts = 0;  // backend calls made, retries included
  std::string prompt_sha256;
  std::optional<std::string> error;
};

struct QuestionJudgement {
  std::string id;
  std::optional<std::string> domain;
  FlawSet flaws;
  std::vector<CriterionOutcome> outcomes;  // canonical order, all 19

  bool complete() const;
};

QuestionJudgement judge_question(const Question& q, Backend& backend, const JudgeOptions& options);

struct CorpusJudgement {
  LabelMatrix matrix{LabelSource::kLlm};
  std::vector<QuestionJudgement> questions;  // corpus order
  std::size_t backend_calls = 0;

  bool complete() const;
  std::vector<std::string> incomplete_ids() const;
};

/// Judges every (question, criterion) pair with at most
/// options.concurrency requests in flight. Rows follow corpus order.
CorpusJudgement judge_corpus(std::span<const Question> corpus, Backend& backend, const JudgeOptions& options);

}  // namespace iwf::judge
