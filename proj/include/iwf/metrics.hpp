#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iwf/core.hpp"
#include "iwf/stats.hpp"

namespace iwf::metrics {

/// Raised when two label sets cover different question ids.
class AlignmentError : public InputError {
 public:
  AlignmentError(std::vector<std::string> only_a, std::vector<std::string> only_b);

  const std::vector<std::string>& only_in_first() const { return only_a_; }
  const std::vector<std::string>& only_in_second() const { return only_b_; }

 private:
  std::vector<std::string> only_a_;
  std::vector<std::string> only_b_;
};

/// Row pairs (index in a, index in b) matched by id, in a's order. Throws
/// AlignmentError listing the ids present in only one matrix, and
/// InputError when both are empty.
std::vector<std::pair<std::size_t, std::size_t>> align(const LabelMatrix& a, const LabelMatrix& b);

/// Agreeing cells over N x 19.
double match_percent(const LabelMatrix& a, const LabelMatrix& b);
/// Fraction of questions whose 19-vectors are identical.
double exact_match_ratio(const LabelMatrix& a, const LabelMatrix& b);
/// Disagreeing cells over N x 19.
double hamming_loss(const LabelMatrix& a, const LabelMatrix& b);

struct CriterionMetrics {
  CriterionId criterion{};
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> f1;  // empty when TP + FP + FN = 0
  std::size_t support = 0;   // gold positives
};

/// Flaw is the positive class.
CriterionMetrics criterion_f1(const LabelMatrix& pred, const LabelMatrix& gold, CriterionId c);

/// Pooled 2TP / (2TP + FP + FN) over the given criteria and, when `ids` is
/// set, only those questions. Empty when nothing is positive on either
/// side. Throws InputError for an empty criteria or id subset.
std::optional<double> micro_f1(const LabelMatrix& pred, const LabelMatrix& gold, std::span<const CriterionId> criteria,
                               std::optional<std::span<const std::string>> ids = std::nullopt);

struct KappaResult {
  double kappa = 1.0;
  double agreement = 1.0;  // observed agreement, in [0, 1]
};

/// Cohen's kappa for two binary raters. Chance agreement of 1 gives
/// kappa = 1. Throws InputError for empty or unequal-length columns.
KappaResult cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

/// Aligned per-criterion kappa between two matrices.
KappaResult criterion_kappa(const LabelMatrix& a, const LabelMatrix& b, CriterionId c);

using Histogram = std::array<std::size_t, kCriterionCount + 1>;

/// Bin i counts questions with exactly i flaws.
Histogram flaw_count_histogram(const LabelMatrix& m);

/// Rows are the gold verdict, columns the predicted one; index 0 is
/// acceptable.
struct VerdictConfusion {
  std::array<std::array<std::size_t, 2>, 2> cells{};
  std::size_t total() const;
  std::size_t agreeing() const { return cells[0][0] + cells[1][1]; }
  double agreement_rate() const;
};

VerdictConfusion verdict_confusion(const LabelMatrix& pred, const LabelMatrix& gold,
                                   int threshold = kDefaultVerdictThreshold);

struct DomainScore {
  std::string domain;
  std::size_t questions = 0;
  std::optional<double> micro_f1;
};

struct EvalSummary {
  std::string pred_source;
  std::string gold_source;
  std::size_t questions = 0;
  int threshold = kDefaultVerdictThreshold;
  double match_percent = 0.0;
  double exact_match = 0.0;
  double hamming_loss = 0.0;
  std::vector<CriterionMetrics> criteria;  // canonical order
  std::vector<KappaResult> kappa;          // canonical order
  std::optional<double> micro_f1;
  std::vector<DomainScore> by_domain;  // sorted by domain; empty unless requested
  Histogram pred_histogram{};
  Histogram gold_histogram{};
  VerdictConfusion confusion;
};

/// Domain per question id; questions without one fall under "(none)".
using DomainMap = std::map<std::string, std::string, std::less<>>;

/// Full comparison of pred against gold. With `by_domain`, domains come
/// from `domains` when given, else from the gold rows, else the pred rows.
EvalSummary evaluate(const LabelMatrix& pred, const LabelMatrix& gold, int threshold = kDefaultVerdictThreshold,
                     bool by_domain = false, const DomainMap* domains = nullptr);

/// A statistic that is either computed or not applicable, with the reason.
struct MaybeTest {
  std::optional<stats::StatTestResult> result;
  std::string unavailable;
};

struct CompareSummary {
  EvalSummary a_vs_gold;
  EvalSummary b_vs_gold;
  EvalSummary a_vs_b;
  MaybeTest pearson_a;  // per-criterion flaw totals, a vs gold
  MaybeTest pearson_b;
  MaybeTest paired_t_a;  // per-question flaw counts, a vs gold
  MaybeTest paired_t_b;
  MaybeTest chi_square;  // verdict totals of gold, a and b
};

/// Number of questions flagged for each criterion.
std::array<double, kCriterionCount> criterion_totals(const LabelMatrix& m);

CompareSummary compare(const LabelMatrix& a, const LabelMatrix& b, const LabelMatrix& gold,
                       int threshold = kDefaultVerdictThreshold, bool by_domain = false,
                       const DomainMap* domains = nullptr);

}  // namespace iwf::metrics
