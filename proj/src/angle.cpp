#include "duality/angle.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace duality {
namespace {

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
    throw std::invalid_argument("invalid angle '" + std::string(whole) + "'");
  return value;
}

} // namespace

double parse_angle(std::string_view text) {
  std::string compact;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') compact.push_back(ch);
  std::string_view s = compact;
  if (s.empty()) throw std::invalid_argument("empty angle");

  double sign = 1.0;
  if (s.front() == '+' || s.front() == '-') {
    sign = s.front() == '-' ? -1.0 : 1.0;
    s.remove_prefix(1);
  }

  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) {
    if (s.find_first_of("+-") == 0) throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
    return sign * parse_number(s, text);
  }

  std::string_view coefficient = s.substr(0, pi_at);
  std::string_view rest = s.substr(pi_at + 2);
  if (!coefficient.empty() && coefficient.back() == '*') coefficient.remove_suffix(1);
  const double numerator = coefficient.empty() ? 1.0 : parse_number(coefficient, text);
  double denominator = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
    denominator = parse_number(rest.substr(1), text);
    if (denominator == 0.0) throw std::invalid_argument("angle '" + std::string(text) + "' divides by zero");
  }
  return sign * numerator * std::numbers::pi / denominator;
}

} // namespace duality
