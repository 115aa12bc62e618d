#pragma once

#include <string>
#include <string_view>

namespace hawkes {

/// Shortest-safe text form of x with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Strict parse of a whole token as a double; throws ConfigError on failure.
double parse_double(std::string_view token);

/// Strict parse of a non-negative integer token.
long long parse_integer(std::string_view token);

}  // namespace hawkes
