#include <array>
#include <charconv>
#include <string>

#include "iwf/text.hpp"

namespace iwf::text {
namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

constexpr std::size_t kMaxUnitLength = 8;

std::optional<double> to_double(std::string_view digits) {
  std::string clean;
  for (char c : digits)
    if (c != ',') clean.push_back(c);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), v);
  if (ec != std::errc{} || ptr != clean.data() + clean.size()) return std::nullopt;
  return v;
}

bool adjacent(const Token& a, const Token& b) { return a.end == b.begin; }

bool is_unit_word(const Token& t) {
  if (t.cls != TokenClass::kWord || t.normal.size() > kMaxUnitLength) return false;
  for (char c : t.normal)
    if (c < 'a' || c > 'z') return false;
  return true;
}

bool is_year(std::string_view s) {
  if (s.size() != 4) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return s.front() == '1' || s.front() == '2';
}

int month_of(std::string_view normal) {
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == normal) return static_cast<int>(i) + 1;
  return 0;
}

}  // namespace

std::optional<Numeric> parse_numeric(std::string_view option_text) {
  auto tokens = tokenize(option_text);
  if (!tokens.empty() && tokens.back().normal == ".") tokens.pop_back();
  if (tokens.empty()) return std::nullopt;

  // "March 1990"
  if (tokens.size() == 2 && month_of(tokens[0].normal) > 0 && is_year(tokens[1].surface)) {
    const double year = *to_double(tokens[1].surface);
    return Numeric{Numeric::Kind::kDate, year + (month_of(tokens[0].normal) - 1) / 12.0};
  }

  std::size_t i = 0;
  double sign = 1.0;
  bool decorated = false;
  if (tokens[i].normal == "$" && i + 1 < tokens.size()) {
    ++i;
    decorated = true;
  }
  if ((tokens[i].normal == "-" || tokens[i].normal == "+") && i + 1 < tokens.size() &&
      adjacent(tokens[i], tokens[i + 1])) {
    sign = tokens[i].normal == "-" ? -1.0 : 1.0;
    ++i;
    decorated = true;
  }
  if (tokens[i].cls != TokenClass::kNumber) return std::nullopt;
  const auto number = to_double(tokens[i].surface);
  if (!number) return std::nullopt;
  double value = *number;
  const std::string& digits = tokens[i].surface;
  ++i;

  if (i + 1 < tokens.size() && tokens[i].normal == "/" &&
      tokens[i + 1].cls == TokenClass::kNumber) {
    const auto denom = to_double(tokens[i + 1].surface);
    if (!denom || *denom == 0.0) return std::nullopt;
    value /= *denom;
    i += 2;
    decorated = true;
  }

  if (i < tokens.size()) {
    if (tokens[i].normal == "%") {
      ++i;
    } else if (is_unit_word(tokens[i])) {
      ++i;
      if (i + 1 < tokens.size() && tokens[i].normal == "/" && is_unit_word(tokens[i + 1])) {
        i += 2;
      } else if (i + 1 < tokens.size() && tokens[i].normal == "^" &&
                 tokens[i + 1].cls == TokenClass::kNumber) {
        i += 2;
      }
    }
    decorated = true;
  }
  if (i != tokens.size()) return std::nullopt;

  if (!decorated && is_year(digits)) return Numeric{Numeric::Kind::kDate, value};
  return Numeric{Numeric::Kind::kNumber, sign * value};
}

}  // namespace iwf::text
