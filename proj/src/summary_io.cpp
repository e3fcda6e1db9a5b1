#include <cstdio>

#include "iwf/io.hpp"
#include "json.hpp"

namespace iwf::io {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  if (v == 0.0) v = 0.0;  // print -0 as 0
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_f1(const std::optional<double>& v) { return v ? fixed(*v, 3) : "-"; }

std::string fmt_p(double p) {
  if (p < 0.001) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", p);
    return buf;
  }
  return fixed(p, 3);
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

/// Left-aligned columns separated by two spaces.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += row[i];
        if (i + 1 < row.size()) line.append(width[i] - row[i].size() + 2, ' ');
      }
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::size_t last_bin(const metrics::Histogram& a, const metrics::Histogram& b) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 || b[i] > 0) last = i;
  return last;
}

ordered_json summary_json(const metrics::EvalSummary& s) {
  ordered_json j;
  j["pred_source"] = s.pred_source;
  j["gold_source"] = s.gold_source;
  j["questions"] = s.questions;
  j["threshold"] = s.threshold;
  j["match_percent"] = s.match_percent;
  j["exact_match_ratio"] = s.exact_match;
  j["hamming_loss"] = s.hamming_loss;
  j["micro_f1"] = opt_json(s.micro_f1);
  ordered_json domains = ordered_json::array();
  for (const auto& d : s.by_domain)
    domains.push_back({{"domain", d.domain}, {"questions", d.questions}, {"micro_f1", opt_json(d.micro_f1)}});
  j["by_domain"] = std::move(domains);
  ordered_json criteria = ordered_json::array();
  for (std::size_t i = 0; i < s.criteria.size(); ++i) {
    const auto& m = s.criteria[i];
    ordered_json c;
    c["criterion"] = name_of(m.criterion);
    c["support"] = m.support;
    c["tp"] = m.tp;
    c["fp"] = m.fp;
    c["fn"] = m.fn;
    c["tn"] = m.tn;
    c["f1"] = opt_json(m.f1);
    if (i < s.kappa.size()) {
      c["kappa"] = s.kappa[i].kappa;
      c["agreement"] = s.kappa[i].agreement;
    }
    criteria.push_back(std::move(c));
  }
  j["criteria"] = std::move(criteria);
  j["histogram"] = {{"gold", s.gold_histogram}, {"pred", s.pred_histogram}};
  j["confusion"] = {{"rows", "gold"},
                    {"columns", "pred"},
                    {"labels", {"acceptable", "unacceptable"}},
                    {"cells", s.confusion.cells},
                    {"agreeing", s.confusion.agreeing()},
                    {"agreement_rate", s.confusion.agreement_rate()}};
  return j;
}

std::string summary_text(const metrics::EvalSummary& s) {
  std::string out = "pred: " + s.pred_source + "  gold: " + s.gold_source + "  questions: " +
                    std::to_string(s.questions) + "  threshold: " + std::to_string(s.threshold) + "\n\n";
  Table overall({"match percent", fixed(100.0 * s.match_percent, 2) + "%"});
  overall.add({"exact-match ratio", fixed(s.exact_match, 3)});
  overall.add({"hamming loss", fixed(s.hamming_loss, 4)});
  overall.add({"micro-average F1", fmt_f1(s.micro_f1)});
  out += overall.render() + "\n";

  Table per({"criterion", "N", "TP", "FP", "FN", "TN", "F1", "kappa", "agreement"});
  for (std::size_t i = 0; i < s.criteria.size(); ++i) {
    const auto& m = s.criteria[i];
    std::vector<std::string> row{std::string(name_of(m.criterion)), std::to_string(m.support), std::to_string(m.tp),
                                 std::to_string(m.fp), std::to_string(m.fn), std::to_string(m.tn), fmt_f1(m.f1)};
    if (i < s.kappa.size()) {
      row.push_back(fixed(s.kappa[i].kappa, 2));
      row.push_back(fixed(100.0 * s.kappa[i].agreement, 2) + "%");
    }
    per.add(std::move(row));
  }
  out += per.render();

  if (!s.by_domain.empty()) {
    out += "\n";
    Table dom({"domain", "questions", "micro-F1"});
    for (const auto& d : s.by_domain) dom.add({d.domain, std::to_string(d.questions), fmt_f1(d.micro_f1)});
    out += dom.render();
  }

  out += "\n";
  Table hist({"flaws", "gold", "pred"});
  for (std::size_t i = 0; i <= last_bin(s.gold_histogram, s.pred_histogram); ++i)
    hist.add({std::to_string(i), std::to_string(s.gold_histogram[i]), std::to_string(s.pred_histogram[i])});
  out += hist.render() + "\n";

  const auto& c = s.confusion.cells;
  Table conf({"gold \\ pred", "acceptable", "unacceptable"});
  conf.add({"acceptable", std::to_string(c[0][0]), std::to_string(c[0][1])});
  conf.add({"unacceptable", std::to_string(c[1][0]), std::to_string(c[1][1])});
  out += conf.render();
  out += "verdict agreement: " + std::to_string(s.confusion.agreeing()) + "/" + std::to_string(s.confusion.total()) +
         " (" + fixed(100.0 * s.confusion.agreement_rate(), 2) + "%)\n";
  return out;
}

ordered_json test_json(const metrics::MaybeTest& t) {
  if (!t.result) return {{"available", false}, {"reason", t.unavailable}};
  return {{"available", true},
          {"statistic", t.result->statistic},
          {"df", t.result->df},
          {"p_value", t.result->p_value},
          {"means", t.result->means},
          {"sds", t.result->sds}};
}

std::string test_text(std::string_view label, std::string_view symbol, const metrics::MaybeTest& t) {
  std::string out(label);
  out += ": ";
  if (!t.result) return out + "n/a (" + t.unavailable + ")\n";
  return out + std::string(symbol) + "(" + fixed(t.result->df, 0) + ") = " + fixed(t.result->statistic, 3) +
         ", p = " + fmt_p(t.result->p_value) + "\n";
}

}  // namespace

std::optional<SummaryFormat> summary_format_from_name(std::string_view name) {
  if (name == "json") return SummaryFormat::kJson;
  if (name == "text" || name == "table") return SummaryFormat::kText;
  return std::nullopt;
}

std::string emit_summary(const metrics::EvalSummary& s, SummaryFormat format) {
  if (format == SummaryFormat::kJson) return summary_json(s).dump(2) + "\n";
  return summary_text(s);
}

std::string emit_compare(const metrics::CompareSummary& s, SummaryFormat format) {
  if (format == SummaryFormat::kJson) {
    ordered_json j;
    j["a_vs_gold"] = summary_json(s.a_vs_gold);
    j["b_vs_gold"] = summary_json(s.b_vs_gold);
    j["a_vs_b"] = summary_json(s.a_vs_b);
    j["pearson_a"] = test_json(s.pearson_a);
    j["pearson_b"] = test_json(s.pearson_b);
    j["paired_t_a"] = test_json(s.paired_t_a);
    j["paired_t_b"] = test_json(s.paired_t_b);
    j["chi_square"] = test_json(s.chi_square);
    return j.dump(2) + "\n";
  }
  std::string out;
  Table side({"criterion", "F1 a", "F1 b", "kappa a-b", "agreement a-b"});
  for (std::size_t i = 0; i < kCriterionCount; ++i) {
    side.add({std::string(name_of(criterion_at(i))), fmt_f1(s.a_vs_gold.criteria[i].f1),
              fmt_f1(s.b_vs_gold.criteria[i].f1), fixed(s.a_vs_b.kappa[i].kappa, 2),
              fixed(100.0 * s.a_vs_b.kappa[i].agreement, 2) + "%"});
  }
  side.add({"micro-average", fmt_f1(s.a_vs_gold.micro_f1), fmt_f1(s.b_vs_gold.micro_f1), "",
            fixed(100.0 * s.a_vs_b.match_percent, 2) + "%"});
  out += side.render() + "\n";
  out += test_text("pearson a vs gold, per-criterion totals", "r", s.pearson_a);
  out += test_text("pearson b vs gold, per-criterion totals", "r", s.pearson_b);
  out += test_text("paired t a vs gold, per-question flaw counts", "t", s.paired_t_a);
  out += test_text("paired t b vs gold, per-question flaw counts", "t", s.paired_t_b);
  out += test_text("chi-square verdicts by method (gold, a, b)", "chi2", s.chi_square);
  out += "\n== a vs gold ==\n" + summary_text(s.a_vs_gold);
  out += "\n== b vs gold ==\n" + summary_text(s.b_vs_gold);
  out += "\n== a vs b ==\n" + summary_text(s.a_vs_b);
  return out;
}

}  // namespace iwf::io
