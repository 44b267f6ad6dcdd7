#include <gtest/gtest.h>

#include <vector>

#include "c2lab/metrics/metrics.h"

namespace c2lab {
namespace {

PacketRecord Delivered(FlowId flow, SimTime sent, SimTime at, std::uint32_t bytes = 1500) {
  PacketRecord r;
  r.flow_id = flow;
  r.size_bytes = bytes;
  r.sent_at = sent;
  r.delivered_at = at;
  r.fate = Fate::kDelivered;
  return r;
}

TEST(PerPacketDelay, SubtractsPropagation) {
  EXPECT_EQ(PerPacketDelay(Delivered(0, Millis(0), Millis(63)), Millis(20)), Millis(43));
  PacketRecord lost;
  lost.fate = Fate::kTailDrop;
  EXPECT_THROW(PerPacketDelay(lost, Millis(20)), std::invalid_argument);
}

TEST(Percentile, NearestRank) {
  std::vector<double> v;
  for (int i = 10; i >= 1; --i) v.push_back(i * 10.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 95), 100.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 50), 50.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 100), 100.0);
  EXPECT_DOUBLE_EQ(Percentile({7.0}, 1), 7.0);
  EXPECT_THROW(Percentile({}, 95), std::invalid_argument);
  EXPECT_THROW(Percentile(v, 0), std::invalid_argument);
  EXPECT_THROW(Percentile(v, 101), std::invalid_argument);
}

TEST(Throughput, CountsDeliveredBitsOnly) {
  std::vector<PacketRecord> recs;
  for (int i = 0; i < 2000; ++i) recs.push_back(Delivered(0, Millis(0), Millis(i % 1000)));
  PacketRecord dropped;
  dropped.size_bytes = 1500;
  dropped.fate = Fate::kAqmDrop;
  recs.push_back(dropped);
  EXPECT_DOUBLE_EQ(ThroughputMbps(recs, Seconds(1)), 24.0);
  EXPECT_THROW(ThroughputMbps(recs, Micros(0)), std::invalid_argument);
}

TEST(Jain, Examples) {
  const std::vector<double> even{5, 5, 5, 5}, one{1, 0, 0, 0}, two{2, 1};
  EXPECT_DOUBLE_EQ(JainIndex(even), 1.0);
  EXPECT_DOUBLE_EQ(JainIndex(one), 0.25);
  EXPECT_DOUBLE_EQ(JainIndex(two), 0.9);
  EXPECT_THROW(JainIndex(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(JainIndex(std::vector<double>{0, 0}), std::invalid_argument);
}

TEST(Timeseries, LateFlowHasZerosBeforeStart) {
  std::vector<PacketRecord> recs;
  for (int ms = 10; ms <= 60000; ms += 10) recs.push_back(Delivered(0, Millis(ms), Millis(ms)));
  for (int ms = 30010; ms <= 60000; ms += 10) recs.push_back(Delivered(1, Millis(ms), Millis(ms)));
  const std::vector<FlowId> flows{0, 1};
  const auto pts = TimeseriesThroughput(recs, flows, Millis(1000), Seconds(60));
  ASSERT_EQ(pts.size(), 120u);
  for (const auto& p : pts) {
    const double expect = (p.flow_id == 1 && p.t < Seconds(30)) ? 0.0 : 1.2;
    EXPECT_NEAR(p.mbps, expect, 1e-9) << p.t.count() << " " << p.flow_id;
  }
}

TEST(Timeseries, SingleBinEqualsAverage) {
  std::vector<PacketRecord> recs;
  for (int ms = 3; ms <= 5000; ms += 3) recs.push_back(Delivered(0, Millis(ms), Millis(ms)));
  const std::vector<FlowId> flows{0};
  const auto pts = TimeseriesThroughput(recs, flows, Seconds(5), Seconds(5));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].mbps, ThroughputMbps(recs, Seconds(5)));
}

TEST(FlowMetrics, WindowAndDrops) {
  std::vector<PacketRecord> recs;
  recs.push_back(Delivered(0, Millis(0), Millis(30)));       // before window
  recs.push_back(Delivered(0, Millis(960), Millis(1000)));   // on the open edge
  recs.push_back(Delivered(0, Millis(990), Millis(1030)));   // delay 20
  recs.push_back(Delivered(0, Millis(1500), Millis(1560)));  // delay 40
  recs.push_back(Delivered(1, Millis(1500), Millis(1560)));  // other flow
  PacketRecord tail;
  tail.fate = Fate::kTailDrop;
  recs.push_back(tail);
  PacketRecord loss;
  loss.fate = Fate::kStochasticLoss;
  recs.push_back(loss);
  const FlowMetrics m = ComputeFlowMetrics(recs, 0, "cubic", Millis(20), Seconds(1), Seconds(2));
  EXPECT_EQ(m.delivered_count, 2u);
  EXPECT_DOUBLE_EQ(m.avg_delay_ms, 30.0);
  EXPECT_DOUBLE_EQ(m.p95_delay_ms, 40.0);
  EXPECT_DOUBLE_EQ(m.avg_throughput_mbps, 2 * 1500 * 8 / 1e6);
  EXPECT_EQ(m.drops.tail, 1u);
  EXPECT_EQ(m.drops.stochastic, 1u);
  EXPECT_EQ(m.drops.aqm, 0u);
  EXPECT_EQ(m.algorithm, "cubic");
}

TEST(FlowMetrics, EmptyWindowIsZeroNotError) {
  std::vector<PacketRecord> recs;
  const FlowMetrics m = ComputeFlowMetrics(recs, 0, "vegas", Millis(20), Seconds(0), Seconds(1));
  EXPECT_EQ(m.delivered_count, 0u);
  EXPECT_DOUBLE_EQ(m.avg_throughput_mbps, 0.0);
}

}  // namespace
}  // namespace c2lab
