#pragma once

#include <string>
#include <vector>

#include "hawkes/events.hpp"

namespace hawkes::cli {

// --bins grammar
//   none              single bin everywhere (marks ignored)
//   edges=a:step:b    uniform edges a, a+step, ..., b
//   count=N           N uniform bins over the observed mark range
//   e0,e1,...,eM      explicit edges
// The same spec applies to every marked component. Without --bins, marked
// components get count=20.
struct BinsSpec {
  enum class Kind { None, Uniform, Count, Explicit };
  Kind kind = Kind::Count;
  double lo = 0.0, step = 0.0, hi = 0.0;
  int count = 20;
  std::vector<double> edges;
};

BinsSpec parse_bins_spec(const std::string& text);

/// Canonical text of a spec; parse_bins_spec(to_string(s)) == s.
std::string to_string(const BinsSpec& s);

/// Per-component edges (empty for unmarked components or Kind::None).
std::vector<std::vector<double>> resolve_bin_edges(const BinsSpec& spec, const EventSeries& s);

/// "lo:step:hi"; hi - lo must be a multiple of step.
std::vector<double> parse_range(const std::string& text);

}  // namespace hawkes::cli
