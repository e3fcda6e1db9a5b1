#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iwf/core.hpp"
#include "iwf/judge.hpp"
#include "iwf/metrics.hpp"

namespace iwf::io {

/// Every problem found in an input file, one "line N: ..." entry each.
class LoadError : public InputError {
 public:
  explicit LoadError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Raised when a file cannot be opened, read, or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// One question object per line; blank lines are skipped. Throws LoadError
/// listing all bad lines.
std::vector<Question> parse_corpus(std::string_view content);
std::vector<Question> load_corpus(const std::filesystem::path& path);

/// One {"id", "flaws": [names], "domain"?, "complete"?} object per line.
/// A missing flaws list is an all-false row.
LabelMatrix parse_labels(std::string_view content, LabelSource source = LabelSource::kOther);
LabelMatrix load_labels(const std::filesystem::path& path, LabelSource source = LabelSource::kOther);

/// Inverse of parse_labels. Rows keep their order; "complete" is written
/// only for incomplete rows.
std::string emit_labels(const LabelMatrix& m);

/// Flaw reports as a label matrix (evidence dropped).
LabelMatrix labels_from_reports(std::span<const FlawReport> reports, std::span<const Question> corpus,
                                LabelSource source = LabelSource::kRules);

enum class ReportFormat { kJson, kTsv, kTable };

std::optional<ReportFormat> report_format_from_name(std::string_view name);

/// Only evidence for flagged criteria is written.
std::string emit_report(std::span<const FlawReport> reports, ReportFormat format);

/// Per-criterion counts, flaw-count histogram, and verdict totals.
std::string emit_lint_summary(std::span<const FlawReport> reports, ReportFormat format);

/// One JSON object per (question, judged criterion) with the raw reply.
std::string emit_audit(const judge::CorpusJudgement& run);

enum class SummaryFormat { kJson, kText };

std::optional<SummaryFormat> summary_format_from_name(std::string_view name);

std::string emit_summary(const metrics::EvalSummary& s, SummaryFormat format);
std::string emit_compare(const metrics::CompareSummary& s, SummaryFormat format);

}  // namespace iwf::io
