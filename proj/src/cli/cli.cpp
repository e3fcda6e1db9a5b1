#include "cli/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "iwf/detectors.hpp"
#include "iwf/io.hpp"
#include "iwf/judge.hpp"
#include "iwf/metrics.hpp"

namespace iwf::cli {
namespace {

struct LintArgs {
  std::string corpus;
  std::string rules;
  int threshold = 0;  // 0 = keep config value
  std::string config;
  std::string format = "json";
  std::string out;
  std::string labels;
  std::string summary;
  unsigned jobs = 0;
};

struct JudgeArgs {
  std::string corpus;
  std::string endpoint;
  std::string model;
  unsigned concurrency = 4;
  std::string cache;
  std::string criteria;
  std::string out;
  std::string audit;
  std::string indeterminate = "retry";
  int attempts = 3;
  int backoff_ms = 500;
  int timeout_ms = 60000;
};

struct EvalArgs {
  std::string pred, gold, a, b;
  std::string corpus;
  bool by_domain = false;
  std::string format = "text";
  int threshold = kDefaultVerdictThreshold;
  std::string out;
};

/// Usage problems found after flag parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void deliver(const std::string& dest, const std::string& bytes, std::ostream& out) {
  if (dest.empty() || dest == "-") {
    out << bytes;
    out.flush();
  } else {
    io::write_file_atomic(dest, bytes);
  }
}

int cmd_lint(const LintArgs& a, std::ostream& out, std::ostream& err) {
  const auto format = io::report_format_from_name(a.format);
  if (!format) throw UsageError("unknown --format \"" + a.format + "\"");
  DetectorConfig cfg;
  if (!a.config.empty()) cfg = parse_detector_config(io::read_file(a.config), cfg);
  if (!a.rules.empty()) cfg.enable_only(parse_criteria_list(a.rules));
  if (a.threshold != 0) cfg.verdict_threshold = a.threshold;
  cfg.validate();

  const auto corpus = io::load_corpus(a.corpus);
  const HeuristicScorer scorer(cfg.stem_token_limit);
  const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto reports = run_corpus(corpus, cfg, scorer, jobs);

  const auto report_bytes = io::emit_report(reports, *format);
  const auto summary_line = io::emit_lint_summary(reports, io::ReportFormat::kTable);
  deliver(a.out, report_bytes, out);
  if (!a.labels.empty()) io::write_file_atomic(a.labels, io::emit_labels(io::labels_from_reports(reports, corpus)));
  if (!a.summary.empty()) io::write_file_atomic(a.summary, io::emit_lint_summary(reports, io::ReportFormat::kJson));
  // Keep stdout parseable when the reports are on it.
  (a.out.empty() || a.out == "-" ? err : out) << summary_line;
  return kSuccess;
}

int cmd_judge(const JudgeArgs& a, std::ostream& out, std::ostream& err) {
  const auto policy = judge::policy_from_name(a.indeterminate);
  if (!policy) throw UsageError("unknown --indeterminate \"" + a.indeterminate + "\"");

  judge::BackendConfig bc;
  bc.endpoint = a.endpoint;
  bc.model = a.model;
  bc.max_concurrency = a.concurrency;
  bc.retry.max_attempts = a.attempts;
  bc.retry.backoff_base = std::chrono::milliseconds(a.backoff_ms);
  bc.timeout = std::chrono::milliseconds(a.timeout_ms);
  if (!a.cache.empty()) bc.cache_dir = a.cache;
  bc.validate();

  std::unique_ptr<judge::Backend> backend;
  if (judge::MockBackend::is_mock_endpoint(a.endpoint)) {
    backend = judge::MockBackend::from_endpoint(a.endpoint, a.model);
  } else {
    const char* key = std::getenv("IWF_API_KEY");
    if (key == nullptr || *key == '\0') {
      err << "error: IWF_API_KEY is not set\n";
      return kUsageError;
    }
    backend = std::make_unique<judge::HttpBackend>(bc, key);
  }

  const auto corpus = io::load_corpus(a.corpus);
  std::optional<judge::ResponseCache> cache;
  if (bc.cache_dir) cache.emplace(*bc.cache_dir);

  judge::JudgeOptions opts;
  opts.policy = *policy;
  opts.retry = bc.retry;
  opts.concurrency = bc.max_concurrency;
  opts.cache = cache ? &*cache : nullptr;
  if (!a.criteria.empty()) {
    opts.criteria.reset();
    for (const auto c : parse_criteria_list(a.criteria)) opts.criteria.set(index_of(c));
  }

  const auto run = judge::judge_corpus(corpus, *backend, opts);
  deliver(a.out, io::emit_labels(run.matrix), out);
  std::string audit_path = a.audit;
  if (audit_path.empty() && !a.out.empty() && a.out != "-") audit_path = a.out + ".audit.jsonl";
  if (!audit_path.empty()) io::write_file_atomic(audit_path, io::emit_audit(run));

  err << "requests: " << run.backend_calls << "\n";
  if (!run.complete()) {
    err << "incomplete:";
    for (const auto& id : run.incomplete_ids()) err << " " << id;
    err << "\n";
    return kJudgeIncomplete;
  }
  return kSuccess;
}

metrics::DomainMap domains_from(const std::string& corpus_path) {
  metrics::DomainMap out;
  if (corpus_path.empty()) return out;
  for (const auto& q : io::load_corpus(corpus_path))
    if (q.domain) out.emplace(q.id, *q.domain);
  return out;
}

io::SummaryFormat summary_format(const std::string& name) {
  const auto f = io::summary_format_from_name(name);
  if (!f) throw UsageError("unknown --format \"" + name + "\"");
  return *f;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto format = summary_format(a.format);
  const auto pred = io::load_labels(a.pred, LabelSource::kOther);
  const auto gold = io::load_labels(a.gold, LabelSource::kHuman);
  const auto domains = domains_from(a.corpus);
  const auto summary = metrics::evaluate(pred, gold, a.threshold, a.by_domain, a.corpus.empty() ? nullptr : &domains);
  deliver(a.out, io::emit_summary(summary, format), out);
  return kSuccess;
}

int cmd_compare(const EvalArgs& a, std::ostream& out) {
  const auto format = summary_format(a.format);
  const auto ma = io::load_labels(a.a, LabelSource::kOther);
  const auto mb = io::load_labels(a.b, LabelSource::kOther);
  const auto gold = io::load_labels(a.gold, LabelSource::kHuman);
  const auto domains = domains_from(a.corpus);
  const auto summary =
      metrics::compare(ma, mb, gold, a.threshold, a.by_domain, a.corpus.empty() ? nullptr : &domains);
  deliver(a.out, io::emit_compare(summary, format), out);
  return kSuccess;
}

void add_eval_common(CLI::App* cmd, EvalArgs& a) {
  cmd->add_option("--corpus", a.corpus, "Corpus file supplying question domains")->check(CLI::ExistingFile);
  cmd->add_flag("--by-domain", a.by_domain, "Report micro-F1 per domain");
  cmd->add_option("--format", a.format, "text or json")->capture_default_str();
  cmd->add_option("--threshold", a.threshold, "Flaw count that makes a question unacceptable")
      ->check(CLI::Range(1, 19))
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Item-writing flaw linter and evaluation harness", "iwf");
  app.require_subcommand(1);
  app.set_version_flag("--version", "iwf 0.1.0");

  LintArgs lint;
  auto* lint_cmd = app.add_subcommand("lint", "Flag item-writing flaws with the rule engine");
  lint_cmd->add_option("corpus", lint.corpus, "Question corpus (JSONL)")->required();
  lint_cmd->add_option("--rules", lint.rules, "Comma-separated criteria to run (default all)");
  lint_cmd->add_option("--threshold", lint.threshold, "Flaw count that makes a question unacceptable")
      ->check(CLI::Range(1, 19));
  lint_cmd->add_option("--config", lint.config, "Detector config file")->check(CLI::ExistingFile);
  lint_cmd->add_option("--format", lint.format, "json, tsv or table")->capture_default_str();
  lint_cmd->add_option("--out", lint.out, "Report file (default stdout)");
  lint_cmd->add_option("--labels", lint.labels, "Also write a label file for eval/compare");
  lint_cmd->add_option("--summary", lint.summary, "Also write the summary as JSON");
  lint_cmd->add_option("--jobs", lint.jobs, "Worker threads (default: hardware threads)")->check(CLI::Range(1, 1024));

  JudgeArgs jg;
  auto* judge_cmd = app.add_subcommand("judge", "Label a corpus with an LLM judge");
  judge_cmd->add_option("corpus", jg.corpus, "Question corpus (JSONL)")->required();
  judge_cmd->add_option("--endpoint", jg.endpoint, "Chat-completions URL, or mock:<mode>")->required();
  judge_cmd->add_option("--model", jg.model, "Model name")->required();
  judge_cmd->add_option("--concurrency", jg.concurrency, "Requests in flight")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  judge_cmd->add_option("--cache", jg.cache, "Response cache directory");
  judge_cmd->add_option("--criteria", jg.criteria, "Comma-separated criteria to judge (default all)");
  judge_cmd->add_option("--out", jg.out, "Label file (default stdout)");
  judge_cmd->add_option("--audit", jg.audit, "Audit log (default <out>.audit.jsonl)");
  judge_cmd->add_option("--indeterminate", jg.indeterminate, "flaw, no-flaw or retry")->capture_default_str();
  judge_cmd->add_option("--attempts", jg.attempts, "Attempts per request")
      ->check(CLI::Range(1, 20))
      ->capture_default_str();
  judge_cmd->add_option("--backoff-ms", jg.backoff_ms, "First retry delay, doubled each time")
      ->check(CLI::Range(0, 600000))
      ->capture_default_str();
  judge_cmd->add_option("--timeout-ms", jg.timeout_ms, "Per-request timeout")
      ->check(CLI::Range(1, 3600000))
      ->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted labels against gold labels");
  eval_cmd->add_option("--pred", ev.pred, "Predicted labels (JSONL)")->required();
  eval_cmd->add_option("--gold", ev.gold, "Gold labels (JSONL)")->required();
  add_eval_common(eval_cmd, ev);

  EvalArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two labelers against gold labels");
  cmp_cmd->add_option("--a", cmp.a, "First method's labels")->required();
  cmp_cmd->add_option("--b", cmp.b, "Second method's labels")->required();
  cmp_cmd->add_option("--gold", cmp.gold, "Gold labels")->required();
  add_eval_common(cmp_cmd, cmp);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (lint_cmd->parsed()) return cmd_lint(lint, out, err);
    if (judge_cmd->parsed()) return cmd_judge(jg, out, err);
    if (eval_cmd->parsed()) return cmd_eval(ev, out);
    return cmd_compare(cmp, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io::FileError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io::LoadError& e) {
    for (const auto& line : e.errors()) err << "error: " << line << "\n";
    return kInvalidInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace iwf::cli
