#include "hawkes/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "hawkes/error.hpp"

namespace hawkes {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), r.ptr);
}

double parse_double(std::string_view token) {
  if (token == "inf" || token == "+inf" || token == "infinity") return HUGE_VAL;
  if (token == "-inf" || token == "-infinity") return -HUGE_VAL;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto r = std::from_chars(token.data(), token.data() + token.size(), value);
  if (r.ec != std::errc{} || r.ptr != token.data() + token.size() || token.empty())
    throw ConfigError("not a number: '" + std::string(token) + "'");
  return value;
}

long long parse_integer(std::string_view token) {
  long long value = 0;
  const auto r = std::from_chars(token.data(), token.data() + token.size(), value);
  if (r.ec != std::errc{} || r.ptr != token.data() + token.size() || token.empty())
    throw ConfigError("not an integer: '" + std::string(token) + "'");
  return value;
}

}  // namespace hawkes
