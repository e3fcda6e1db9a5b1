#include <charconv>
#include <fstream>
#include <sstream>

#include "iwf/detectors.hpp"
#include "iwf/text.hpp"

namespace iwf {
namespace {

template <typename T>
T parse_number(std::string_view value, std::size_t line, std::string_view key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw InputError("config line " + std::to_string(line) + ": bad value for " + std::string(key) + ": \"" +
                     std::string(value) + "\"");
  return out;
}

void require(bool ok, std::string_view what) {
  if (!ok) throw InputError("detector config: " + std::string(what));
}

}  // namespace

void DetectorConfig::enable_only(std::span<const CriterionId> criteria) {
  enabled.reset();
  for (const auto c : criteria) enabled.set(index_of(c));
}

void DetectorConfig::validate() const {
  require(fuzzy_edits >= 0 && fuzzy_edits <= 5, "fuzzy_edits outside [0, 5]");
  require(cue_margin >= 0.0 && cue_margin <= 1.0, "cue_margin outside [0, 1]");
  require(ambiguity_threshold >= 0.0 && ambiguity_threshold <= 1.0, "ambiguity_threshold outside [0, 1]");
  require(plausibility_threshold >= 0.0 && plausibility_threshold <= 1.0,
          "plausibility_threshold outside [0, 1]");
  require(stem_token_limit >= 1 && stem_token_limit <= 10000, "stem_token_limit outside [1, 10000]");
  require(verdict_threshold >= 1 && verdict_threshold <= static_cast<int>(kCriterionCount),
          "threshold outside [1, 19]");
}

DetectorConfig parse_detector_config(std::string_view content, DetectorConfig cfg) {
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content.remove_prefix(nl == std::string_view::npos ? content.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos)
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = text::trim(line.substr(0, sep));
    const auto value = text::trim(line.substr(sep + 1));

    if (key == "fuzzy_edits") {
      cfg.fuzzy_edits = parse_number<int>(value, line_no, key);
    } else if (key == "cue_margin") {
      cfg.cue_margin = parse_number<double>(value, line_no, key);
    } else if (key == "ambiguity_threshold") {
      cfg.ambiguity_threshold = parse_number<double>(value, line_no, key);
    } else if (key == "plausibility_threshold") {
      cfg.plausibility_threshold = parse_number<double>(value, line_no, key);
    } else if (key == "stem_token_limit") {
      cfg.stem_token_limit = parse_number<std::size_t>(value, line_no, key);
    } else if (key == "threshold") {
      cfg.verdict_threshold = parse_number<int>(value, line_no, key);
    } else if (key == "rules") {
      cfg.enable_only(parse_criteria_list(value));
    } else if (key == "disable") {
      for (const auto c : parse_criteria_list(value)) cfg.enabled.reset(index_of(c));
    } else {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key \"" + std::string(key) + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

DetectorConfig load_detector_config(const std::filesystem::path& path, DetectorConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_detector_config(buf.str(), base);
}

}  // namespace iwf
