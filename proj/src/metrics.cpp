#include "iwf/metrics.hpp"

#include <algorithm>
#include <set>

namespace iwf::metrics {
namespace {

std::string describe(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto join = [](const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out.empty() ? std::string("(none)") : out;
  };
  return "question ids differ; only in first: " + join(a) + "; only in second: " + join(b);
}

struct Cells {
  std::size_t agree = 0;
  std::size_t total = 0;
};

Cells count_cells(const LabelMatrix& a, const LabelMatrix& b) {
  Cells out;
  for (const auto& [i, j] : align(a, b)) {
    for (std::size_t c = 0; c < kCriterionCount; ++c)
      if (a[i].flaws.at(c) == b[j].flaws.at(c)) ++out.agree;
    out.total += kCriterionCount;
  }
  return out;
}

std::optional<double> f1_of(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

MaybeTest attempt(auto&& fn) {
  MaybeTest out;
  try {
    out.result = fn();
  } catch (const InputError& e) {
    out.unavailable = e.what();
  }
  return out;
}

std::vector<double> flaw_counts(const LabelMatrix& m, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                bool first) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(m[first ? i : j].flaws.count());
  return out;
}

}  // namespace

AlignmentError::AlignmentError(std::vector<std::string> only_a, std::vector<std::string> only_b)
    : InputError(describe(only_a, only_b)), only_a_(std::move(only_a)), only_b_(std::move(only_b)) {}

std::vector<std::pair<std::size_t, std::size_t>> align(const LabelMatrix& a, const LabelMatrix& b) {
  if (a.empty() && b.empty()) throw InputError("no questions to compare");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::string> only_a, only_b;
  pairs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (const auto j = b.find(a[i].id)) {
      pairs.emplace_back(i, *j);
    } else {
      only_a.push_back(a[i].id);
    }
  }
  for (const auto& row : b.rows())
    if (!a.find(row.id)) only_b.push_back(row.id);
  if (!only_a.empty() || !only_b.empty()) {
    std::sort(only_a.begin(), only_a.end());
    std::sort(only_b.begin(), only_b.end());
    throw AlignmentError(std::move(only_a), std::move(only_b));
  }
  return pairs;
}

double match_percent(const LabelMatrix& a, const LabelMatrix& b) {
  const auto cells = count_cells(a, b);
  return static_cast<double>(cells.agree) / static_cast<double>(cells.total);
}

double hamming_loss(const LabelMatrix& a, const LabelMatrix& b) {
  const auto cells = count_cells(a, b);
  return static_cast<double>(cells.total - cells.agree) / static_cast<double>(cells.total);
}

double exact_match_ratio(const LabelMatrix& a, const LabelMatrix& b) {
  const auto pairs = align(a, b);
  std::size_t exact = 0;
  for (const auto& [i, j] : pairs)
    if (a[i].flaws == b[j].flaws) ++exact;
  return static_cast<double>(exact) / static_cast<double>(pairs.size());
}

CriterionMetrics criterion_f1(const LabelMatrix& pred, const LabelMatrix& gold, CriterionId c) {
  CriterionMetrics m;
  m.criterion = c;
  for (const auto& [i, j] : align(pred, gold)) {
    const bool p = pred[i].flaws[c];
    const bool g = gold[j].flaws[c];
    if (p && g) ++m.tp;
    if (p && !g) ++m.fp;
    if (!p && g) ++m.fn;
    if (!p && !g) ++m.tn;
  }
  m.support = m.tp + m.fn;
  m.f1 = f1_of(m.tp, m.fp, m.fn);
  return m;
}

std::optional<double> micro_f1(const LabelMatrix& pred, const LabelMatrix& gold, std::span<const CriterionId> criteria,
                               std::optional<std::span<const std::string>> ids) {
  if (criteria.empty()) throw InputError("micro_f1: empty criterion subset");
  if (ids && ids->empty()) throw InputError("micro_f1: empty question subset");
  const auto pairs = align(pred, gold);
  std::set<std::string_view> keep;
  if (ids) keep.insert(ids->begin(), ids->end());
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [i, j] : pairs) {
    if (ids && !keep.contains(pred[i].id)) continue;
    for (const auto c : criteria) {
      const bool p = pred[i].flaws[c];
      const bool g = gold[j].flaws[c];
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
  }
  return f1_of(tp, fp, fn);
}

KappaResult cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) throw InputError("cohen_kappa: columns differ in length");
  if (a.empty()) throw InputError("cohen_kappa: empty columns");
  const double n = static_cast<double>(a.size());
  std::size_t agree = 0, a_pos = 0, b_pos = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_pos += a[i];
    b_pos += b[i];
  }
  KappaResult r;
  r.agreement = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a_pos) / n;
  const double pb = static_cast<double>(b_pos) / n;
  const double pe = pa * pb + (1.0 - pa) * (1.0 - pb);
  r.kappa = pe >= 1.0 ? 1.0 : (r.agreement - pe) / (1.0 - pe);
  return r;
}

KappaResult criterion_kappa(const LabelMatrix& a, const LabelMatrix& b, CriterionId c) {
  std::vector<bool> ca, cb;
  for (const auto& [i, j] : align(a, b)) {
    ca.push_back(a[i].flaws[c]);
    cb.push_back(b[j].flaws[c]);
  }
  return cohen_kappa(ca, cb);
}

Histogram flaw_count_histogram(const LabelMatrix& m) {
  Histogram h{};
  for (const auto& row : m.rows()) ++h[static_cast<std::size_t>(row.flaws.count())];
  return h;
}

std::size_t VerdictConfusion::total() const { return cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1]; }

double VerdictConfusion::agreement_rate() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(agreeing()) / static_cast<double>(n);
}

VerdictConfusion verdict_confusion(const LabelMatrix& pred, const LabelMatrix& gold, int threshold) {
  VerdictConfusion out;
  for (const auto& [i, j] : align(pred, gold)) {
    const auto g = verdict_of(gold[j].flaws.count(), threshold) == Verdict::kUnacceptable;
    const auto p = verdict_of(pred[i].flaws.count(), threshold) == Verdict::kUnacceptable;
    ++out.cells[g][p];
  }
  return out;
}

EvalSummary evaluate(const LabelMatrix& pred, const LabelMatrix& gold, int threshold, bool by_domain,
                     const DomainMap* domains) {
  const auto pairs = align(pred, gold);
  verdict_of(0, threshold);  // validates the threshold up front

  EvalSummary s;
  s.pred_source = std::string(to_string(pred.source()));
  s.gold_source = std::string(to_string(gold.source()));
  s.questions = pairs.size();
  s.threshold = threshold;
  s.match_percent = match_percent(pred, gold);
  s.hamming_loss = hamming_loss(pred, gold);
  s.exact_match = exact_match_ratio(pred, gold);
  for (const auto c : all_criteria()) {
    s.criteria.push_back(criterion_f1(pred, gold, c));
    s.kappa.push_back(criterion_kappa(pred, gold, c));
  }
  s.micro_f1 = micro_f1(pred, gold, all_criteria());
  s.pred_histogram = flaw_count_histogram(pred);
  s.gold_histogram = flaw_count_histogram(gold);
  s.confusion = verdict_confusion(pred, gold, threshold);

  if (by_domain) {
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [i, j] : pairs) {
      std::optional<std::string> d;
      if (domains) {
        if (const auto it = domains->find(pred[i].id); it != domains->end()) d = it->second;
      }
      if (!d) d = gold[j].domain ? gold[j].domain : pred[i].domain;
      groups[d.value_or("(none)")].push_back(pred[i].id);
    }
    for (const auto& [domain, ids] : groups)
      s.by_domain.push_back({domain, ids.size(), micro_f1(pred, gold, all_criteria(), ids)});
  }
  return s;
}

std::array<double, kCriterionCount> criterion_totals(const LabelMatrix& m) {
  std::array<double, kCriterionCount> out{};
  for (const auto& row : m.rows())
    for (std::size_t c = 0; c < kCriterionCount; ++c) out[c] += row.flaws.at(c);
  return out;
}

CompareSummary compare(const LabelMatrix& a, const LabelMatrix& b, const LabelMatrix& gold, int threshold,
                       bool by_domain, const DomainMap* domains) {
  CompareSummary s;
  s.a_vs_gold = evaluate(a, gold, threshold, by_domain, domains);
  s.b_vs_gold = evaluate(b, gold, threshold, by_domain, domains);
  s.a_vs_b = evaluate(a, b, threshold, false, nullptr);

  const auto ta = criterion_totals(a);
  const auto tb = criterion_totals(b);
  const auto tg = criterion_totals(gold);
  s.pearson_a = attempt([&] { return stats::pearson_r(ta, tg); });
  s.pearson_b = attempt([&] { return stats::pearson_r(tb, tg); });

  const auto pa = align(a, gold);
  const auto pb = align(b, gold);
  s.paired_t_a = attempt([&] { return stats::paired_t(flaw_counts(a, pa, true), flaw_counts(gold, pa, false)); });
  s.paired_t_b = attempt([&] { return stats::paired_t(flaw_counts(b, pb, true), flaw_counts(gold, pb, false)); });

  s.chi_square = attempt([&] {
    std::vector<std::vector<double>> table;
    for (const auto* m : {&gold, &a, &b}) {
      std::vector<double> row(2, 0.0);
      for (const auto& r : m->rows()) row[verdict_of(r.flaws.count(), threshold) == Verdict::kUnacceptable] += 1.0;
      table.push_back(row);
    }
    return stats::chi_square(table);
  });
  return s;
}

}  // namespace iwf::metrics
