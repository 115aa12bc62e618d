#include "hawkes/events.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string_view>
#include <tuple>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/model.hpp"

namespace hawkes {
namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
    if (k >= line.size()) break;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t') ++k;
    out.push_back(line.substr(start, k - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

void validate_component(const ComponentEvents& c, int j, double horizon) {
  const std::string who = "component " + std::to_string(j);
  if (c.marked && c.marks.size() != c.times.size()) throw ConfigError(who + ": one mark per event required");
  if (!c.marked && !c.marks.empty()) throw ConfigError(who + ": marks given for an unmarked component");
  for (std::size_t n = 0; n < c.times.size(); ++n) {
    const double t = c.times[n];
    if (!std::isfinite(t) || t < 0.0 || t > horizon)
      throw ConfigError(who + ": time " + format_double(t) + " outside [0, " + format_double(horizon) + "]");
    if (n > 0 && !(t > c.times[n - 1]))
      throw ConfigError(who + ": times not strictly increasing at " + format_double(t));
    if (c.marked && !std::isfinite(c.marks[n])) throw ConfigError(who + ": non-finite mark");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

EventSeries::EventSeries(double horizon, std::vector<ComponentEvents> components)
    : horizon_(horizon), components_(std::move(components)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ConfigError("horizon must be finite and > 0");
  if (components_.empty()) throw ConfigError("event series needs at least one component");
  for (std::size_t j = 0; j < components_.size(); ++j)
    validate_component(components_[j], static_cast<int>(j), horizon_);
}

EventSeries EventSeries::empty(int dim, double horizon, std::vector<bool> marked) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  std::vector<ComponentEvents> comps(static_cast<std::size_t>(dim));
  for (std::size_t j = 0; j < comps.size() && j < marked.size(); ++j) comps[j].marked = marked[j];
  return EventSeries(horizon, std::move(comps));
}

std::size_t EventSeries::total_size() const {
  std::size_t n = 0;
  for (const auto& c : components_) n += c.times.size();
  return n;
}

EventSeries EventSeries::window(double t0, double t1) const {
  if (!(t1 > t0)) throw ConfigError("window: empty interval");
  std::vector<ComponentEvents> out(components_.size());
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& c = components_[j];
    out[j].marked = c.marked;
    const auto lo = std::lower_bound(c.times.begin(), c.times.end(), t0) - c.times.begin();
    const auto hi = std::upper_bound(c.times.begin(), c.times.end(), t1) - c.times.begin();
    for (auto n = lo; n < hi; ++n) {
      out[j].times.push_back(c.times[static_cast<std::size_t>(n)] - t0);
      if (c.marked) out[j].marks.push_back(c.marks[static_cast<std::size_t>(n)]);
    }
  }
  return EventSeries(t1 - t0, std::move(out));
}

EventSeries EventSeries::without_marks() const {
  std::vector<ComponentEvents> out(components_.size());
  for (std::size_t j = 0; j < components_.size(); ++j) out[j].times = components_[j].times;
  return EventSeries(horizon_, std::move(out));
}

// ---------------------------------------------------------------------------

EventSeries read_events(std::istream& in, const std::string& source) {
  int dim = -1;
  double horizon = -1.0;
  std::vector<bool> marked;
  std::vector<ComponentEvents> comps;
  bool body_started = false;

  auto ensure_header = [&](std::size_t line_no) {
    if (body_started) return;
    if (dim < 1) throw ParseError(source, line_no, "missing '#dim' header before data");
    if (!(horizon > 0.0)) throw ParseError(source, line_no, "missing '#horizon' header before data");
    comps.assign(static_cast<std::size_t>(dim), ComponentEvents{});
    if (marked.empty()) marked.assign(static_cast<std::size_t>(dim), false);
    for (std::size_t j = 0; j < comps.size(); ++j) comps[j].marked = marked[j];
    body_started = true;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto fields = split_ws(line.substr(1));
      if (fields.empty()) continue;
      const std::string_view key = fields[0];
      if (key != "dim" && key != "horizon" && key != "marked") continue;
      if (body_started) throw ParseError(source, line_no, "header '#" + std::string(key) + "' after data rows");
      try {
        if (key == "dim") {
          if (fields.size() != 2) throw ConfigError("expected '#dim D'");
          const long long d = parse_integer(fields[1]);
          if (d < 1 || d > 1000000) throw ConfigError("dimension out of range");
          dim = static_cast<int>(d);
        } else if (key == "horizon") {
          if (fields.size() != 2) throw ConfigError("expected '#horizon T'");
          horizon = parse_double(fields[1]);
          if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be finite and > 0");
        } else {
          if (dim < 1) throw ConfigError("'#marked' must follow '#dim'");
          if (fields.size() != static_cast<std::size_t>(dim) + 1)
            throw ConfigError("'#marked' needs one flag per component");
          marked.clear();
          for (std::size_t k = 1; k < fields.size(); ++k) {
            if (fields[k] != "0" && fields[k] != "1") throw ConfigError("marked flags must be 0 or 1");
            marked.push_back(fields[k] == "1");
          }
        }
      } catch (const ConfigError& e) {
        throw ParseError(source, line_no, e.what());
      }
      continue;
    }

    ensure_header(line_no);
    auto fields = line.find('\t') != std::string_view::npos ? split(line, '\t') : split_ws(line);
    for (auto& f : fields) f = trim(f);
    try {
      if (fields.size() < 2) throw ConfigError("expected 'component<TAB>time[<TAB>mark]'");
      const long long j = parse_integer(fields[0]);
      if (j < 0 || j >= dim) throw ConfigError("component id " + std::string(fields[0]) + " out of range");
      auto& c = comps[static_cast<std::size_t>(j)];
      const double t = parse_double(fields[1]);
      if (!std::isfinite(t) || t < 0.0 || t > horizon)
        throw ConfigError("time " + std::string(fields[1]) + " outside [0, horizon]");
      if (!c.times.empty() && !(t > c.times.back())) {
        if (t == c.times.back()) throw ConfigError("duplicate time " + std::string(fields[1]) + " in component " + std::to_string(j));
        throw ConfigError("non-monotone time " + std::string(fields[1]) + " in component " + std::to_string(j));
      }
      if (c.marked) {
        if (fields.size() != 3) throw ConfigError("missing mark for marked component " + std::to_string(j));
        const double m = parse_double(fields[2]);
        if (!std::isfinite(m)) throw ConfigError("non-finite mark");
        c.marks.push_back(m);
      } else if (fields.size() != 2) {
        throw ConfigError("mark given for unmarked component " + std::to_string(j));
      }
      c.times.push_back(t);
    } catch (const ConfigError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  ensure_header(line_no + 1);
  return EventSeries(horizon, std::move(comps));
}

EventSeries load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open event file '" + path + "'");
  return read_events(in, path);
}

void write_events(std::ostream& out, const EventSeries& s) {
  out << "#dim " << s.dim() << '\n' << "#horizon " << format_double(s.horizon()) << '\n' << "#marked";
  for (int j = 0; j < s.dim(); ++j) out << ' ' << (s.marked(j) ? 1 : 0);
  out << '\n';

  // k-way merge by (time, component)
  std::vector<std::size_t> pos(static_cast<std::size_t>(s.dim()), 0);
  for (;;) {
    int best = -1;
    for (int j = 0; j < s.dim(); ++j) {
      const auto& t = s.times(j);
      const std::size_t p = pos[static_cast<std::size_t>(j)];
      if (p >= t.size()) continue;
      if (best < 0 || t[p] < s.times(best)[pos[static_cast<std::size_t>(best)]]) best = j;
    }
    if (best < 0) break;
    const std::size_t p = pos[static_cast<std::size_t>(best)]++;
    out << best << '\t' << format_double(s.times(best)[p]);
    if (s.marked(best)) out << '\t' << format_double(s.marks(best)[p]);
    out << '\n';
  }
}

void save_events(const std::string& path, const EventSeries& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write event file '" + path + "'");
  write_events(out, s);
  if (!out) throw ConfigError("error writing event file '" + path + "'");
}

// ---------------------------------------------------------------------------

EventSeries read_csv(std::istream& in, const CsvImportOptions& options, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  if (options.header) {
    while (std::getline(in, raw)) {
      ++line_no;
      if (!trim(raw).empty()) break;
    }
    for (auto f : split(trim(raw), options.delimiter)) header.emplace_back(trim(f));
  }

  auto resolve = [&](const std::string& spec) -> long long {
    if (spec.empty()) return -1;
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == spec) return static_cast<long long>(k);
    try {
      return parse_integer(spec);
    } catch (const ConfigError&) {
      throw ConfigError("CSV column '" + spec + "' not found in header of " + source);
    }
  };
  const long long tcol = resolve(options.time_col);
  const long long mcol = resolve(options.mark_col);
  const long long ccol = resolve(options.component_col);
  if (tcol < 0) throw ConfigError("CSV import: time column required");

  struct Row {
    double t;
    double mark;
    std::string component;
  };
  std::vector<Row> rows;
  std::map<std::string, int> ids;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, options.delimiter);
    auto field = [&](long long col) -> std::string_view {
      if (col >= static_cast<long long>(fields.size()))
        throw ParseError(source, line_no, "missing column " + std::to_string(col));
      return trim(fields[static_cast<std::size_t>(col)]);
    };
    Row r{};
    try {
      r.t = parse_double(field(tcol));
      r.mark = mcol >= 0 ? parse_double(field(mcol)) : 0.0;
    } catch (const ConfigError& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!std::isfinite(r.t)) throw ParseError(source, line_no, "non-finite time");
    r.component = ccol >= 0 ? std::string(field(ccol)) : std::string("0");
    ids.emplace(r.component, 0);
    rows.push_back(std::move(r));
  }

  // Component ids: integer labels keep their value order, others sort lexically.
  int next = 0;
  bool numeric = true;
  for (const auto& [label, id] : ids) {
    try {
      parse_integer(label);
    } catch (const ConfigError&) {
      numeric = false;
    }
  }
  std::vector<std::string> labels;
  for (const auto& kv : ids) labels.push_back(kv.first);
  if (numeric)
    std::sort(labels.begin(), labels.end(),
              [](const std::string& a, const std::string& b) { return parse_integer(a) < parse_integer(b); });
  for (const auto& label : labels) ids[label] = next++;
  const int dim = std::max(1, next);

  if (options.sort)
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
  const double t0 = options.shift_to_zero && !rows.empty()
                        ? std::min_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
                            return a.t < b.t;
                          })->t
                        : 0.0;

  std::vector<ComponentEvents> comps(static_cast<std::size_t>(dim));
  for (auto& c : comps) c.marked = mcol >= 0;
  std::size_t dropped = 0;
  double last = 0.0;
  for (const auto& r : rows) {
    auto& c = comps[static_cast<std::size_t>(ids[r.component])];
    const double t = r.t - t0;
    if (options.drop_duplicates && !c.times.empty() && t == c.times.back()) {
      ++dropped;
      continue;
    }
    c.times.push_back(t);
    if (c.marked) c.marks.push_back(r.mark);
    last = std::max(last, t);
  }
  if (dropped > 0) warn("CSV import: dropped " + std::to_string(dropped) + " duplicate timestamps");
  const double horizon = options.horizon > 0.0 ? options.horizon : (last > 0.0 ? last : 1.0);
  return EventSeries(horizon, std::move(comps));
}

EventSeries import_csv(const std::string& path, const CsvImportOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
  return read_csv(in, options, path);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd empirical_rates(const EventSeries& s) {
  Eigen::VectorXd rates(s.dim());
  for (int j = 0; j < s.dim(); ++j) {
    rates(j) = static_cast<double>(s.size(j)) / s.horizon();
    if (s.size(j) == 0) warn("component " + std::to_string(j) + " has no events (degenerate component)");
  }
  return rates;
}

MarkBins mark_bin_probabilities(const EventSeries& s, int j, const std::vector<double>& edges,
                                OutOfRangeMarks policy) {
  if (edges.size() < 2) throw ConfigError("mark bins need at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw ConfigError("mark bin edges must be strictly increasing");
  if (!s.marked(j)) throw ConfigError("component " + std::to_string(j) + " carries no marks");

  MarkBins bins;
  bins.edges = edges;
  bins.counts.assign(edges.size() - 1, 0);
  for (double x : s.marks(j)) {
    if (x < edges.front() || x > edges.back()) {
      if (policy == OutOfRangeMarks::Error)
        throw ConfigError("mark " + format_double(x) + " outside the bin range of component " + std::to_string(j));
      ++bins.clamped;
    }
    ++bins.counts[clamped_bin(edges, x)];
  }
  const double total = static_cast<double>(s.size(j));
  bins.probabilities.resize(bins.counts.size(), 0.0);
  if (total > 0)
    for (std::size_t l = 0; l < bins.counts.size(); ++l)
      bins.probabilities[l] = static_cast<double>(bins.counts[l]) / total;
  if (bins.clamped > 0)
    warn("component " + std::to_string(j) + ": " + std::to_string(bins.clamped) +
         " marks outside the bin range were clamped to the end bins");
  return bins;
}

MarkBins single_bin(std::size_t events) {
  MarkBins bins;
  bins.edges = {-HUGE_VAL, HUGE_VAL};
  bins.counts = {events};
  bins.probabilities = {1.0};
  return bins;
}

std::vector<std::size_t> assign_bins(const EventSeries& s, int j, const std::vector<double>& edges) {
  std::vector<std::size_t> out(s.size(j), 0);
  if (!s.marked(j) || edges.size() < 3) return out;
  const auto& m = s.marks(j);
  for (std::size_t n = 0; n < m.size(); ++n) out[n] = clamped_bin(edges, m[n]);
  return out;
}

std::vector<double> merge_empty_bins(const std::vector<double>& edges, const std::vector<std::size_t>& counts) {
  // Drop the right edge of each empty bin (merging it into its right
  // neighbour); a trailing empty bin is merged into its left neighbour.
  std::vector<double> out{edges.front()};
  std::vector<std::size_t> kept;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0 && l + 1 < counts.size()) continue;
    if (counts[l] == 0 && !kept.empty()) {
      out.back() = edges[l + 1];
      continue;
    }
    out.push_back(edges[l + 1]);
    kept.push_back(counts[l]);
  }
  return out;
}

std::vector<double> uniform_edges(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw ConfigError("uniform edges: need lo < hi and step > 0");
  const auto n = static_cast<long long>(std::llround((hi - lo) / step));
  if (n < 1 || std::abs(lo + static_cast<double>(n) * step - hi) > 1e-9 * std::max(1.0, std::abs(hi)))
    throw ConfigError("uniform edges: (hi - lo) must be a multiple of step");
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) e[static_cast<std::size_t>(k)] = lo + static_cast<double>(k) * step;
  e.back() = hi;
  return e;
}

double median_inter_event_time(const EventSeries& s) {
  std::vector<double> all;
  all.reserve(s.total_size());
  for (int j = 0; j < s.dim(); ++j) all.insert(all.end(), s.times(j).begin(), s.times(j).end());
  if (all.size() < 2) return s.horizon();
  std::sort(all.begin(), all.end());
  std::vector<double> gaps(all.size() - 1);
  for (std::size_t k = 0; k + 1 < all.size(); ++k) gaps[k] = all[k + 1] - all[k];
  auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  return *mid;
}

}  // namespace hawkes
