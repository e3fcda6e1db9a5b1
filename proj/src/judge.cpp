#include "iwf/judge.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include "iwf/resources.hpp"
#include "iwf/text.hpp"

namespace iwf::judge {
namespace {

constexpr std::string_view kPromptLead =
    "Begin your response with yes or no, does this multiple-choice question satisfy the criteria relating to ";

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

struct Task {
  std::size_t question;
  CriterionId criterion;
};

class Runner {
 public:
  Runner(Backend& backend, const JudgeOptions& options) : backend_(backend), options_(options) {}

  CriterionOutcome judge(const Question& q, CriterionId c) {
    CriterionOutcome out;
    out.criterion = c;
    out.judged = true;
    const auto& spec = options_.prompts[index_of(c)];
    const std::string prompt = build_prompt(q, spec);
    out.prompt_sha256 = sha256_hex(prompt);
    const std::string model = backend_.model();

    if (options_.cache) {
      if (auto hit = options_.cache->get(prompt, model)) {
        out.cached = true;
        out.response = parse_response(*hit);
        apply_policy(out, /*may_retry=*/false, prompt);
        return out;
      }
    }
    auto raw = call(prompt, out);
    if (!raw) return out;
    out.response = parse_response(*raw);
    apply_policy(out, /*may_retry=*/true, prompt);
    if (options_.cache && !out.error) options_.cache->put(prompt, model, out.response->raw);
    return out;
  }

  std::size_t calls() const { return calls_.load(); }

 private:
  std::optional<std::string> call(const std::string& prompt, CriterionOutcome& out) {
    const int max_attempts = std::max(1, options_.retry.max_attempts);
    auto delay = options_.retry.backoff_base;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
      ++out.attempts;
      ++calls_;
      try {
        return backend_.complete(prompt);
      } catch (const TransportError& e) {
        out.error = e.what();
      }
      if (attempt < max_attempts) {
        if (options_.sleep) {
          options_.sleep(delay);
        } else {
          std::this_thread::sleep_for(delay);
        }
        delay *= 2;
      }
    }
    return std::nullopt;
  }

  void apply_policy(CriterionOutcome& out, bool may_retry, const std::string& prompt) {
    if (out.response->parsed == Judgement::kIndeterminate && may_retry &&
        options_.policy == IndeterminatePolicy::kRetryOnce) {
      CriterionOutcome retry;
      if (auto raw = call(prompt, retry)) out.response = parse_response(*raw);
      out.attempts += retry.attempts;
    }
    out.error.reset();
    switch (out.response->parsed) {
      case Judgement::kSatisfied: out.flaw = false; break;
      case Judgement::kViolated: out.flaw = true; break;
      case Judgement::kIndeterminate:
        out.indeterminate = true;
        out.flaw = options_.policy == IndeterminatePolicy::kFlaw;
        break;
    }
  }

  Backend& backend_;
  const JudgeOptions& options_;
  std::atomic<std::size_t> calls_{0};
};

QuestionJudgement assemble(const Question& q, std::vector<CriterionOutcome> outcomes) {
  QuestionJudgement j;
  j.id = q.id;
  j.domain = q.domain;
  j.outcomes = std::move(outcomes);
  for (const auto& o : j.outcomes)
    if (o.judged && !o.error && o.flaw) j.flaws.set(o.criterion);
  return j;
}

std::vector<CriterionOutcome> blank_outcomes() {
  std::vector<CriterionOutcome> out(kCriterionCount);
  for (std::size_t i = 0; i < kCriterionCount; ++i) out[i].criterion = criterion_at(i);
  return out;
}

}  // namespace

std::vector<CriterionPromptSpec> parse_prompt_specs(std::string_view tsv) {
  std::vector<std::optional<CriterionPromptSpec>> slots(kCriterionCount);
  for (const auto line : split(tsv, '\n')) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw InputError("rubric table: expected 3 tab-separated fields");
    const auto c = criterion_from_name(fields[0]);
    if (!c) throw InputError("rubric table: unknown criterion \"" + std::string(fields[0]) + "\"");
    if (slots[index_of(*c)]) throw InputError("rubric table: duplicate criterion \"" + std::string(fields[0]) + "\"");
    slots[index_of(*c)] = CriterionPromptSpec{*c, std::string(fields[1]), std::string(fields[2])};
  }
  std::vector<CriterionPromptSpec> out;
  for (std::size_t i = 0; i < kCriterionCount; ++i) {
    if (!slots[i]) throw InputError("rubric table: missing " + std::string(name_of(criterion_at(i))));
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::span<const CriterionPromptSpec> prompt_specs() {
  // Always the embedded copy: prompt bytes must not depend on the environment.
  static const std::vector<CriterionPromptSpec> kSpecs =
      parse_prompt_specs(resources::load("criteria.tsv", std::nullopt));
  return kSpecs;
}

const CriterionPromptSpec& prompt_spec(CriterionId c) { return prompt_specs()[index_of(c)]; }

std::string render_question(const Question& q) {
  std::string out = q.stem;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    out += '\n';
    out += option_label(i);
    out += ". ";
    out += q.options[i];
    if (i == q.answer_index) out += " (correct)";
  }
  return out;
}

std::string build_prompt(const Question& q, const CriterionPromptSpec& spec) {
  std::string out(kPromptLead);
  out += spec.display_name;
  out += ": ";
  out += spec.definition;
  out += "? Explain why. ";
  out += render_question(q);
  return out;
}

std::optional<CriterionId> criterion_in_prompt(std::string_view prompt) {
  if (!prompt.starts_with(kPromptLead)) return std::nullopt;
  prompt.remove_prefix(kPromptLead.size());
  for (const auto& spec : prompt_specs())
    if (prompt.starts_with(spec.display_name + ": ")) return spec.criterion;
  return std::nullopt;
}

std::string_view to_string(Judgement j) {
  switch (j) {
    case Judgement::kSatisfied: return "satisfied";
    case Judgement::kViolated: return "violated";
    case Judgement::kIndeterminate: break;
  }
  return "indeterminate";
}

JudgeResponse parse_response(std::string_view raw) {
  JudgeResponse r;
  r.raw = std::string(raw);
  std::string_view rest = text::trim(raw);
  std::size_t n = 0;
  while (n < rest.size() && is_alpha(rest[n])) ++n;
  const auto word = text::to_lower(rest.substr(0, n));
  if (word == "yes") {
    r.parsed = Judgement::kSatisfied;
  } else if (word == "no") {
    r.parsed = Judgement::kViolated;
  } else {
    r.explanation = std::string(rest);
    return r;
  }
  rest.remove_prefix(n);
  while (!rest.empty() && !is_alpha(rest.front()) && !std::isdigit(static_cast<unsigned char>(rest.front())) &&
         static_cast<unsigned char>(rest.front()) < 0x80)
    rest.remove_prefix(1);
  // Skip a UTF-8 dash between the verdict and the explanation.
  while (rest.starts_with("\xE2\x80\x94") || rest.starts_with("\xE2\x80\x93")) {
    rest.remove_prefix(3);
    rest = text::trim(rest);
  }
  r.explanation = std::string(rest);
  return r;
}

void BackendConfig::validate() const {
  if (max_concurrency < 1) throw InputError("concurrency must be at least 1");
  if (retry.max_attempts < 1) throw InputError("attempts must be at least 1");
  if (endpoint.empty()) throw InputError("endpoint is required");
  if (model.empty()) throw InputError("model is required");
}

std::unique_ptr<MockBackend> MockBackend::from_endpoint(std::string_view endpoint, std::string model) {
  if (!is_mock_endpoint(endpoint)) throw InputError("not a mock endpoint: " + std::string(endpoint));
  endpoint.remove_prefix(5);
  std::string fail;
  if (const auto semi = endpoint.find(';'); semi != std::string_view::npos) {
    const auto opt = endpoint.substr(semi + 1);
    if (!opt.starts_with("fail=") || opt.size() == 5)
      throw InputError("mock endpoint option must be fail=<text>");
    fail = std::string(opt.substr(5));
    endpoint = endpoint.substr(0, semi);
  }

  std::bitset<kCriterionCount> violated;
  bool unclear = false;
  if (endpoint == "yes") {
  } else if (endpoint == "no") {
    violated.set();
  } else if (endpoint == "unclear") {
    unclear = true;
  } else if (endpoint.starts_with("no=")) {
    for (const auto c : parse_criteria_list(endpoint.substr(3))) violated.set(index_of(c));
  } else {
    throw InputError("unknown mock mode \"" + std::string(endpoint) + "\"");
  }

  auto responder = [violated, unclear, fail](const std::string& prompt) -> std::string {
    if (!fail.empty() && prompt.find(fail) != std::string::npos) throw TransportError("mock failure");
    if (unclear) return "It depends on how the options are read.";
    const auto c = criterion_in_prompt(prompt);
    if (c && violated.test(index_of(*c))) return "No, the question violates this criterion.";
    return "Yes, the question satisfies this criterion.";
  };
  return std::make_unique<MockBackend>(std::move(model), std::move(responder));
}

std::string MockBackend::complete(const std::string& prompt) {
  ++calls_;
  return responder_(prompt);
}

std::optional<IndeterminatePolicy> policy_from_name(std::string_view name) {
  if (name == "flaw") return IndeterminatePolicy::kFlaw;
  if (name == "no-flaw") return IndeterminatePolicy::kNoFlaw;
  if (name == "retry") return IndeterminatePolicy::kRetryOnce;
  return std::nullopt;
}

bool QuestionJudgement::complete() const {
  return std::none_of(outcomes.begin(), outcomes.end(),
                      [](const CriterionOutcome& o) { return o.error.has_value(); });
}

QuestionJudgement judge_question(const Question& q, Backend& backend, const JudgeOptions& options) {
  auto result = judge_corpus(std::span<const Question>(&q, 1), backend, options);
  return std::move(result.questions.front());
}

bool CorpusJudgement::complete() const {
  return std::all_of(questions.begin(), questions.end(), [](const auto& q) { return q.complete(); });
}

std::vector<std::string> CorpusJudgement::incomplete_ids() const {
  std::vector<std::string> out;
  for (const auto& q : questions)
    if (!q.complete()) out.push_back(q.id);
  return out;
}

CorpusJudgement judge_corpus(std::span<const Question> corpus, Backend& backend, const JudgeOptions& options) {
  if (options.prompts.size() != kCriterionCount) throw InputError("prompt table must hold 19 criteria");
  std::vector<Task> tasks;
  for (std::size_t qi = 0; qi < corpus.size(); ++qi)
    for (const auto c : all_criteria())
      if (options.criteria.test(index_of(c))) tasks.push_back({qi, c});

  std::vector<std::vector<CriterionOutcome>> slots(corpus.size(), blank_outcomes());
  Runner runner(backend, options);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++)
      slots[tasks[t].question][index_of(tasks[t].criterion)] = runner.judge(corpus[tasks[t].question], tasks[t].criterion);
  };
  const unsigned workers = std::clamp<unsigned>(options.concurrency, 1, std::max<std::size_t>(1, tasks.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  CorpusJudgement out;
  for (std::size_t qi = 0; qi < corpus.size(); ++qi) {
    auto j = assemble(corpus[qi], std::move(slots[qi]));
    out.matrix.add(LabelRow{j.id, j.flaws, j.domain, j.complete()});
    out.questions.push_back(std::move(j));
  }
  out.backend_calls = runner.calls();
  return out;
}

}  // namespace iwf::judge
