#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iwf/detectors.hpp"
#include "iwf/io.hpp"
#include "iwf/judge.hpp"
#include "iwf/metrics.hpp"
#include "iwf/stats.hpp"

namespace py = pybind11;

namespace {

using iwf::CriterionId;

iwf::Question make_question(std::string id, std::string stem, std::vector<std::string> options,
                            std::int64_t answer_index, std::optional<std::string> domain) {
  auto v = iwf::validate_question({std::move(id), std::move(domain), std::move(stem), std::move(options), answer_index});
  if (auto* errors = std::get_if<std::vector<std::string>>(&v)) {
    std::string msg;
    for (const auto& e : *errors) msg += (msg.empty() ? "" : "; ") + e;
    throw py::value_error(msg);
  }
  return std::get<iwf::Question>(std::move(v));
}

std::vector<std::string> flaw_names(const iwf::FlawSet& f) {
  std::vector<std::string> out;
  for (const auto c : f.flagged()) out.emplace_back(iwf::name_of(c));
  return out;
}

CriterionId criterion(std::string_view name) {
  const auto c = iwf::criterion_from_name(name);
  if (!c) throw py::value_error("unknown criterion \"" + std::string(name) + "\"");
  return *c;
}

/// Label matrix from {id: [criterion names]} pairs in the given order.
iwf::LabelMatrix matrix(const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
  iwf::LabelMatrix m;
  for (const auto& [id, names] : rows) {
    iwf::LabelRow row;
    row.id = id;
    for (const auto& n : names) row.flaws.set(criterion(n));
    m.add(std::move(row));
  }
  return m;
}

py::dict report_dict(const iwf::FlawReport& r) {
  py::dict d;
  d["id"] = r.question_id;
  d["flaws"] = flaw_names(r.flaws);
  d["flaw_count"] = r.flaw_count;
  d["verdict"] = std::string(iwf::to_string(r.verdict));
  py::list evidence;
  for (const auto& e : r.evidence) {
    if (!r.flaws[e.criterion]) continue;
    evidence.append(py::make_tuple(std::string(iwf::name_of(e.criterion)), e.message));
  }
  d["evidence"] = evidence;
  return d;
}

iwf::DetectorConfig config_from(std::optional<std::vector<std::string>> rules, int threshold) {
  iwf::DetectorConfig cfg;
  if (rules) {
    std::vector<CriterionId> ids;
    for (const auto& r : *rules) ids.push_back(criterion(r));
    cfg.enable_only(ids);
  }
  cfg.verdict_threshold = threshold;
  cfg.validate();
  return cfg;
}

py::dict stat_dict(const iwf::stats::StatTestResult& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["df"] = r.df;
  d["p_value"] = r.p_value;
  d["means"] = r.means;
  d["sds"] = r.sds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_iwf, m) {
  m.doc() = "Item-writing flaw detection and label comparison";

  py::register_exception<iwf::InputError>(m, "InputError", PyExc_ValueError);

  py::class_<iwf::Question>(m, "Question")
      .def(py::init(&make_question), py::arg("id"), py::arg("stem"), py::arg("options"), py::arg("answer_index"),
           py::arg("domain") = py::none())
      .def_readonly("id", &iwf::Question::id)
      .def_readonly("stem", &iwf::Question::stem)
      .def_readonly("options", &iwf::Question::options)
      .def_readonly("answer_index", &iwf::Question::answer_index)
      .def_readonly("domain", &iwf::Question::domain)
      .def("__repr__", [](const iwf::Question& q) { return "<Question " + q.id + ">"; });

  m.def("criteria", [] {
    std::vector<std::string> out;
    for (const auto c : iwf::all_criteria()) out.emplace_back(iwf::name_of(c));
    return out;
  }, "Criterion names in canonical order.");

  m.def("verdict", [](int flaw_count, int threshold) { return std::string(iwf::to_string(iwf::verdict_of(flaw_count, threshold))); },
        py::arg("flaw_count"), py::arg("threshold") = iwf::kDefaultVerdictThreshold);

  m.def("lint", [](const iwf::Question& q, std::optional<std::vector<std::string>> rules, int threshold) {
    const auto cfg = config_from(std::move(rules), threshold);
    const iwf::HeuristicScorer scorer(cfg.stem_token_limit);
    return report_dict(iwf::run_all(q, cfg, scorer));
  }, py::arg("question"), py::arg("rules") = py::none(), py::arg("threshold") = iwf::kDefaultVerdictThreshold,
        "Runs the rule engine on one question.");

  m.def("lint_corpus", [](const std::string& path, std::optional<std::vector<std::string>> rules, int threshold) {
    const auto cfg = config_from(std::move(rules), threshold);
    const auto corpus = iwf::io::load_corpus(path);
    const iwf::HeuristicScorer scorer(cfg.stem_token_limit);
    std::vector<iwf::FlawReport> reports;
    {
      py::gil_scoped_release release;
      reports = iwf::run_corpus(corpus, cfg, scorer, 1);
    }
    py::list out;
    for (const auto& r : reports) out.append(report_dict(r));
    return out;
  }, py::arg("path"), py::arg("rules") = py::none(), py::arg("threshold") = iwf::kDefaultVerdictThreshold);

  m.def("build_prompt", [](const iwf::Question& q, std::string_view criterion_name) {
    return iwf::judge::build_prompt(q, iwf::judge::prompt_spec(criterion(criterion_name)));
  }, py::arg("question"), py::arg("criterion"));

  m.def("parse_response", [](std::string_view raw) {
    const auto r = iwf::judge::parse_response(raw);
    return py::make_tuple(std::string(iwf::judge::to_string(r.parsed)), r.explanation);
  }, py::arg("raw"), "Returns (judgement, explanation).");

  m.def("judge_mock", [](const iwf::Question& q, const std::string& endpoint) {
    auto backend = iwf::judge::MockBackend::from_endpoint(endpoint, "mock");
    iwf::judge::JudgeOptions opts;
    const auto j = iwf::judge::judge_question(q, *backend, opts);
    return py::make_tuple(flaw_names(j.flaws), backend->calls());
  }, py::arg("question"), py::arg("endpoint") = "mock:yes",
        "Judges one question with a mock endpoint; returns (flaws, requests).");

  using Rows = std::vector<std::pair<std::string, std::vector<std::string>>>;
  m.def("match_percent", [](const Rows& a, const Rows& b) { return iwf::metrics::match_percent(matrix(a), matrix(b)); });
  m.def("hamming_loss", [](const Rows& a, const Rows& b) { return iwf::metrics::hamming_loss(matrix(a), matrix(b)); });
  m.def("exact_match_ratio",
        [](const Rows& a, const Rows& b) { return iwf::metrics::exact_match_ratio(matrix(a), matrix(b)); });
  m.def("criterion_f1", [](const Rows& pred, const Rows& gold, std::string_view name) {
    const auto r = iwf::metrics::criterion_f1(matrix(pred), matrix(gold), criterion(name));
    py::dict d;
    d["tp"] = r.tp;
    d["fp"] = r.fp;
    d["fn"] = r.fn;
    d["tn"] = r.tn;
    d["support"] = r.support;
    d["f1"] = r.f1;
    return d;
  });
  m.def("micro_f1", [](const Rows& pred, const Rows& gold) {
    return iwf::metrics::micro_f1(matrix(pred), matrix(gold), iwf::all_criteria());
  });
  m.def("cohen_kappa", [](const std::vector<bool>& a, const std::vector<bool>& b) {
    const auto r = iwf::metrics::cohen_kappa(a, b);
    return py::make_tuple(r.kappa, r.agreement);
  }, "Returns (kappa, observed agreement).");

  m.def("pearson_r", [](const std::vector<double>& x, const std::vector<double>& y) {
    return stat_dict(iwf::stats::pearson_r(x, y));
  });
  m.def("paired_t", [](const std::vector<double>& x, const std::vector<double>& y) {
    return stat_dict(iwf::stats::paired_t(x, y));
  });
  m.def("chi_square", [](const std::vector<std::vector<double>>& table) {
    return stat_dict(iwf::stats::chi_square(table));
  });
}
