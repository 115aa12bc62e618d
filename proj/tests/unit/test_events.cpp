#include <sstream>

#include <gtest/gtest.h>

#include "hawkes/error.hpp"
#include "hawkes/events.hpp"

using namespace hawkes;

namespace {

EventSeries small_series() {
  ComponentEvents a{{0.5, 1.0, 3.25}, {}, false};
  ComponentEvents b{{0.75, 2.0}, {1.5, 0.25}, true};
  return EventSeries(4.0, {a, b});
}

}  // namespace

TEST(Events, RoundTripIsCanonical) {
  const EventSeries s = small_series();
  std::stringstream out;
  write_events(out, s);
  const std::string first = out.str();
  std::istringstream in(first);
  const EventSeries back = read_events(in);
  EXPECT_EQ(back.times(0), s.times(0));
  EXPECT_EQ(back.marks(1), s.marks(1));
  EXPECT_TRUE(back.marked(1));
  std::stringstream again;
  write_events(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(Events, ParseErrorsCarryLine) {
  std::istringstream in("#dim 1\n#horizon 5\n0\t1.0\n0\tabc\n");
  try {
    read_events(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Events, RejectsEventsPastHorizon) {
  ComponentEvents a{{0.5, 6.0}, {}, false};
  EXPECT_THROW(EventSeries(5.0, {a}), ConfigError);
}

TEST(Events, WindowShifts) {
  const EventSeries w = small_series().window(0.8, 3.0);
  EXPECT_DOUBLE_EQ(w.horizon(), 2.2);
  ASSERT_EQ(w.size(0), 1u);
  EXPECT_NEAR(w.times(0)[0], 0.2, 1e-15);
  ASSERT_EQ(w.size(1), 1u);
  EXPECT_DOUBLE_EQ(w.marks(1)[0], 0.25);
}

TEST(Events, CsvImport) {
  std::istringstream in("t,mag,kind\n3.0,2.5,b\n1.0,1.5,a\n2.0,0.5,a\n");
  CsvImportOptions o;
  o.time_col = "t";
  o.mark_col = "mag";
  o.component_col = "kind";
  o.horizon = 4.0;
  const EventSeries s = read_csv(in, o);
  ASSERT_EQ(s.dim(), 2);
  EXPECT_EQ(s.times(0), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(s.marks(0), (std::vector<double>{1.5, 0.5}));
  EXPECT_EQ(s.times(1), (std::vector<double>{3.0}));
}

TEST(Events, CsvUnknownColumn) {
  std::istringstream in("t\n1\n");
  CsvImportOptions o;
  o.time_col = "time";
  EXPECT_THROW(read_csv(in, o), Error);
}

TEST(Events, RatesAndBins) {
  const EventSeries s = small_series();
  const Eigen::VectorXd r = empirical_rates(s);
  EXPECT_DOUBLE_EQ(r(0), 0.75);
  EXPECT_DOUBLE_EQ(r(1), 0.5);
  const MarkBins b = mark_bin_probabilities(s, 1, {0.0, 1.0, 2.0});
  EXPECT_EQ(b.counts, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(b.probabilities, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(assign_bins(s, 1, {0.0, 1.0, 2.0}), (std::vector<std::size_t>{1, 0}));
}

TEST(Events, OutOfRangeMarks) {
  const EventSeries s = small_series();
  const MarkBins b = mark_bin_probabilities(s, 1, {0.5, 1.0});
  EXPECT_EQ(b.clamped, 2u);
  EXPECT_THROW(mark_bin_probabilities(s, 1, {0.5, 1.0}, OutOfRangeMarks::Error), Error);
}

TEST(Events, MergeEmptyBins) {
  const auto e = merge_empty_bins({0, 1, 2, 3, 4}, {3, 0, 0, 2});
  EXPECT_EQ(e.front(), 0.0);
  EXPECT_EQ(e.back(), 4.0);
  EXPECT_EQ(e.size(), 3u);
}

TEST(Events, UniformEdges) {
  const auto e = uniform_edges(0.0, 10.0, 0.5);
  ASSERT_EQ(e.size(), 21u);
  EXPECT_DOUBLE_EQ(e[7], 3.5);
  EXPECT_DOUBLE_EQ(e.back(), 10.0);
}

TEST(Events, MedianGap) {
  // pooled times 0 1 3 6 (over two components): gaps 1 2 3
  ComponentEvents a{{0.0, 3.0}, {}, false};
  ComponentEvents b{{1.0, 6.0}, {}, false};
  EXPECT_DOUBLE_EQ(median_inter_event_time(EventSeries(7.0, {a, b})), 2.0);
}
