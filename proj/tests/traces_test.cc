#include <gtest/gtest.h>

#include <stdexcept>

#include "c2lab/traces/link_trace.h"

namespace c2lab {
namespace {

TEST(ParseTrace, SteadyTwelveMegabit) {
  const LinkTrace t = ParseTrace("1\n2\n3\n");
  EXPECT_EQ(t.opportunities().size(), 3u);
  EXPECT_EQ(t.period_ms(), 3u);
  EXPECT_DOUBLE_EQ(t.MeanRateMbps(), 12.0);
}

TEST(ParseTrace, RepeatedTimestamps) {
  const LinkTrace t = ParseTrace("5\n5\n5\n");
  EXPECT_EQ(t.opportunities(), (std::vector<std::uint32_t>{5, 5, 5}));
  EXPECT_EQ(t.period_ms(), 5u);
}

TEST(ParseTrace, LineEndingsAndTrailingNewline) {
  EXPECT_EQ(ParseTrace("1\r\n2\r\n4\r\n").opportunities(), ParseTrace("1\n2\n4").opportunities());
}

TEST(ParseTrace, RejectsMalformedInput) {
  EXPECT_THROW(ParseTrace("3\n1\n"), std::invalid_argument);
  EXPECT_THROW(ParseTrace(""), std::invalid_argument);
  EXPECT_THROW(ParseTrace("1\nx\n"), std::invalid_argument);
  EXPECT_THROW(ParseTrace("1\n-2\n"), std::invalid_argument);
  EXPECT_THROW(ParseTrace("1.5\n"), std::invalid_argument);
  EXPECT_THROW(ParseTrace("0\n0\n"), std::invalid_argument);
  EXPECT_THROW(ParseTrace("1\n\n2\n"), std::invalid_argument);
}

TEST(ParseTrace, SerializeRoundTrip) {
  const LinkTrace t = ParseTrace("0\n0\n3\n7\n7\n9\n");
  const LinkTrace u = ParseTrace(t.Serialize());
  EXPECT_EQ(t.opportunities(), u.opportunities());
  EXPECT_EQ(t.period_ms(), u.period_ms());
  EXPECT_EQ(t.Serialize(), "0\n0\n3\n7\n7\n9\n");
}

TEST(LoadTraceFile, MissingFileIsRuntimeError) {
  EXPECT_THROW(LoadTraceFile("/nonexistent/trace"), std::runtime_error);
}

TEST(GenConstantTrace, OpportunityDensity) {
  EXPECT_EQ(GenConstantTrace(24, 1000).opportunities().size(), 2000u);
  EXPECT_EQ(GenConstantTrace(12, 1000).opportunities().size(), 1000u);
  const LinkTrace slow = GenConstantTrace(0.012, 1000);
  EXPECT_EQ(slow.opportunities().size(), 1u);
  EXPECT_EQ(slow.period_ms(), 1000u);
}

TEST(GenConstantTrace, EvenSpacing) {
  const LinkTrace t = GenConstantTrace(24, 1000);
  for (std::uint64_t ms = 1; ms < 3000; ++ms) {
    EXPECT_EQ(t.OpportunitiesIn(ms, ms + 1), 2u) << ms;
  }
  EXPECT_NEAR(GenConstantTrace(7.3, 1000).MeanRateMbps(), 7.3, 0.012);
}

TEST(GenConstantTrace, RejectsNonPositiveRate) {
  EXPECT_THROW(GenConstantTrace(0, 1000), std::invalid_argument);
  EXPECT_THROW(GenConstantTrace(-1, 1000), std::invalid_argument);
}

TEST(GenStepTrace, PerSegmentCounts) {
  const LinkTrace t = GenStepTrace({{24, 1000}, {2.4, 1000}});
  EXPECT_EQ(t.period_ms(), 2000u);
  // Segment [a, b) places its opportunities in (a, b].
  EXPECT_EQ(t.OpportunitiesIn(1, 1001), 2000u);
  EXPECT_EQ(t.OpportunitiesIn(1001, 2001), 200u);
  EXPECT_EQ(t.OpportunitiesIn(2001, 3001), 2000u);
}

TEST(GenStepTrace, SingleStepEqualsConstant) {
  EXPECT_EQ(GenStepTrace({{24, 1000}}).opportunities(), GenConstantTrace(24, 1000).opportunities());
  EXPECT_EQ(GenStepTrace({{0.012, 1000}}).opportunities().size(), 1u);
}

TEST(GenStepTrace, OutagesAndErrors) {
  const LinkTrace t = GenStepTrace({{12, 1000}, {0, 500}, {12, 500}});
  EXPECT_EQ(t.OpportunitiesIn(1001, 1501), 0u);
  EXPECT_EQ(t.OpportunitiesIn(1501, 2001), 500u);
  EXPECT_THROW(GenStepTrace({}), std::invalid_argument);
  EXPECT_THROW(GenStepTrace({{12, 0}}), std::invalid_argument);
  EXPECT_THROW(GenStepTrace({{12, 1000}, {0, 500}}), std::invalid_argument);
}

TEST(RandomWalk, SeededAndBounded) {
  const LinkTrace a = GenRandomWalkTrace(7, 12, 1, 30, 500, 20000);
  const LinkTrace b = GenRandomWalkTrace(7, 12, 1, 30, 500, 20000);
  const LinkTrace c = GenRandomWalkTrace(8, 12, 1, 30, 500, 20000);
  EXPECT_EQ(a.opportunities(), b.opportunities());
  EXPECT_NE(a.opportunities(), c.opportunities());
  EXPECT_EQ(a.period_ms(), 20000u);
  for (std::uint64_t s = 0; s < 20000; s += 500) {
    const double mbps = a.OpportunitiesIn(s, s + 500) * 1500.0 * 8 / 500 / 1000;
    EXPECT_GE(mbps, 1.0 - 0.05);
    EXPECT_LE(mbps, 30.0 + 0.05);
  }
}

TEST(OpportunityCursor, LoopsWithPeriod) {
  const LinkTrace t = ParseTrace("1\n3\n3\n");
  OpportunityCursor cur(t);
  std::vector<std::uint64_t> got;
  for (int i = 0; i < 7; ++i) got.push_back(cur.NextMs());
  EXPECT_EQ(got, (std::vector<std::uint64_t>{1, 3, 3, 4, 6, 6, 7}));
}

TEST(LinkTrace, RateFidelityOverWholePeriods) {
  for (const LinkTrace& t :
       {GenConstantTrace(24, 1000), GenStepTrace({{24, 700}, {0, 100}, {2.4, 1200}}),
        GenRandomWalkTrace(3, 10, 1, 20, 250, 5000)}) {
    // (0, k*period] holds exactly k copies of the schedule.
    for (std::uint64_t k = 1; k <= 3; ++k) {
      EXPECT_EQ(t.OpportunitiesIn(1, k * t.period_ms() + 1) * t.mtu_bytes(),
                k * t.opportunities().size() * t.mtu_bytes());
    }
  }
}

}  // namespace
}  // namespace c2lab
