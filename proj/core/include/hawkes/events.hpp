#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hawkes {

/// Events of one component: sorted times and, when marked, one mark per time.
struct ComponentEvents {
  std::vector<double> times;
  std::vector<double> marks;  // empty when the component is unmarked
  bool marked = false;
};

/// A realization of a D-dimensional point process observed on [0, T].
/// Validated on construction; immutable afterwards.
class EventSeries {
 public:
  EventSeries() = default;
  EventSeries(double horizon, std::vector<ComponentEvents> components);

  /// D components with no events.
  static EventSeries empty(int dim, double horizon, std::vector<bool> marked = {});

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  double horizon() const noexcept { return horizon_; }
  const ComponentEvents& component(int j) const { return components_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& times(int j) const { return component(j).times; }
  const std::vector<double>& marks(int j) const { return component(j).marks; }
  bool marked(int j) const { return component(j).marked; }
  std::size_t size(int j) const { return component(j).times.size(); }
  std::size_t total_size() const;

  /// Events in [t0, t1], shifted so that t0 maps to 0; horizon t1 - t0.
  EventSeries window(double t0, double t1) const;

  /// Same events with marks dropped.
  EventSeries without_marks() const;

 private:
  double horizon_ = 0.0;
  std::vector<ComponentEvents> components_;
};

// ---------------------------------------------------------------------------
// .hev text format
//
//   #dim D
//   #horizon T
//   #marked m_0 ... m_{D-1}        (0 or 1 each; optional, default all 0)
//   component<TAB>time[<TAB>mark]  (0-based component id)
//
// Other lines starting with '#' are comments. Times are printed with 17
// significant digits. The canonical form orders rows by time, ties by component.

EventSeries load_events(const std::string& path);
EventSeries read_events(std::istream& in, const std::string& source = "<stream>");
void save_events(const std::string& path, const EventSeries& s);
void write_events(std::ostream& out, const EventSeries& s);

// ---------------------------------------------------------------------------
// CSV import

struct CsvImportOptions {
  std::string time_col = "0";       // header name or 0-based index
  std::string mark_col;             // empty: unmarked
  std::string component_col;        // empty: single component
  char delimiter = ',';
  bool header = true;
  double horizon = 0.0;             // 0: last event time
  bool shift_to_zero = false;       // subtract the first time
  bool sort = true;                 // sort rows by time before validation
  bool drop_duplicates = false;     // drop repeated times within a component
};

EventSeries import_csv(const std::string& path, const CsvImportOptions& options);
EventSeries read_csv(std::istream& in, const CsvImportOptions& options, const std::string& source = "<stream>");

// ---------------------------------------------------------------------------
// First-order statistics

/// J^i / T per component. Components without events produce a warning.
Eigen::VectorXd empirical_rates(const EventSeries& s);

enum class OutOfRangeMarks { Clamp, Error };

struct MarkBins {
  std::vector<double> edges;          // e_0 < ... < e_M
  std::vector<double> probabilities;  // p_l = count_l / J
  std::vector<std::size_t> counts;
  std::size_t clamped = 0;            // marks outside [e_0, e_M] assigned to end bins

  std::size_t size() const noexcept { return counts.size(); }
};

/// Bin l holds marks in [e_l, e_{l+1}); the last bin is closed on the right.
MarkBins mark_bin_probabilities(const EventSeries& s, int j, const std::vector<double>& edges,
                                OutOfRangeMarks policy = OutOfRangeMarks::Clamp);

/// Single bin spanning the real line (the unmarked reduction).
MarkBins single_bin(std::size_t events);

/// Bin index of every event of component j.
std::vector<std::size_t> assign_bins(const EventSeries& s, int j, const std::vector<double>& edges);

/// Merges empty bins into a neighbour; returns the surviving edges.
std::vector<double> merge_empty_bins(const std::vector<double>& edges, const std::vector<std::size_t>& counts);

/// Uniform edges lo, lo + step, ..., hi.
std::vector<double> uniform_edges(double lo, double hi, double step);

/// Median gap between consecutive events of the pooled series.
double median_inter_event_time(const EventSeries& s);

}  // namespace hawkes
