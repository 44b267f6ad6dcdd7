#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "c2lab/link/bottleneck_link.h"
#include "c2lab/link/codel.h"
#include "c2lab/scenario/config.h"

namespace c2lab {
namespace {

Packet Data(FlowId flow, std::uint64_t seq) {
  Packet p;
  p.flow_id = flow;
  p.seq = seq;
  p.size_bytes = 1500;
  return p;
}

TEST(BottleneckLink, TailDropAtCapacity) {
  LinkConfig cfg;
  cfg.queue_cap = 2;
  std::vector<std::uint64_t> dropped;
  BottleneckLink link(cfg, 1, [&](const Packet& p, Fate f) {
    EXPECT_EQ(f, Fate::kTailDrop);
    dropped.push_back(p.seq);
  });
  EXPECT_EQ(link.Enqueue(Data(0, 0), Micros(0)), EnqueueResult::kAccepted);
  EXPECT_EQ(link.Enqueue(Data(0, 1), Micros(0)), EnqueueResult::kAccepted);
  EXPECT_EQ(link.Enqueue(Data(0, 2), Micros(0)), EnqueueResult::kTailDropped);
  EXPECT_EQ(dropped, std::vector<std::uint64_t>{2});
  EXPECT_EQ(link.Counters(0).tail_drops, 1u);
  EXPECT_TRUE(link.Counters(0).Conserved());
}

TEST(BottleneckLink, UnlimitedAlwaysAccepts) {
  BottleneckLink link(LinkConfig{}, 1);
  for (int i = 0; i < 100000; ++i) {
    ASSERT_EQ(link.Enqueue(Data(0, i), Micros(0)), EnqueueResult::kAccepted);
  }
  EXPECT_EQ(link.QueueLength(), 100000u);
}

TEST(BottleneckLink, BdpCapForFairnessSetup) {
  EXPECT_EQ(BdpPackets(24.0, Millis(40), 1500), 80u);
}

TEST(BottleneckLink, EmptyQueueWastesOpportunity) {
  BottleneckLink link(LinkConfig{}, 1);
  EXPECT_FALSE(link.OnDeliveryOpportunity(Millis(1)).has_value());
  EXPECT_EQ(link.OpportunitiesSeen(), 1u);
}

TEST(BottleneckLink, FifoDelivery) {
  BottleneckLink link(LinkConfig{}, 1);
  for (int i = 0; i < 5; ++i) link.Enqueue(Data(i % 2, i), Millis(i));
  for (int i = 0; i < 5; ++i) {
    auto p = link.OnDeliveryOpportunity(Millis(10 + i));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->seq, static_cast<std::uint64_t>(i));
    EXPECT_EQ(p->enqueued_at, Millis(i));
  }
}

TEST(BottleneckLink, LossProbOneDiscardsEverything) {
  LinkConfig cfg;
  cfg.loss_prob = 1.0;
  int lost = 0;
  BottleneckLink link(cfg, 1, [&](const Packet&, Fate f) { lost += f == Fate::kStochasticLoss; });
  for (int i = 0; i < 50; ++i) link.Enqueue(Data(0, i), Micros(0));
  for (int i = 0; i < 50; ++i) EXPECT_FALSE(link.OnDeliveryOpportunity(Millis(i)).has_value());
  EXPECT_EQ(lost, 50);
  EXPECT_EQ(link.QueueLength(), 0u);
  EXPECT_EQ(link.Counters(0).stochastic_losses, 50u);
}

TEST(BottleneckLink, RejectsBadConfigAndPackets) {
  LinkConfig cfg;
  cfg.loss_prob = 1.5;
  EXPECT_THROW(BottleneckLink(cfg, 1), std::invalid_argument);
  BottleneckLink link(LinkConfig{}, 1);
  Packet big = Data(0, 0);
  big.size_bytes = 1501;
  EXPECT_THROW(link.Enqueue(big, Micros(0)), std::invalid_argument);
}

TEST(BottleneckLink, ConservationUnderRandomLoad) {
  LinkConfig cfg;
  cfg.queue_cap = 30;
  cfg.aqm = AqmKind::kCodel;
  cfg.loss_prob = 0.05;
  BottleneckLink link(cfg, 11);
  SeededRng rng(5);
  std::uint64_t delivered_bytes = 0;
  std::uint64_t opportunities = 0;
  for (int ms = 0; ms < 20000; ++ms) {
    const int arrivals = static_cast<int>(rng.NextBelow(4));
    for (int a = 0; a < arrivals; ++a) {
      link.Enqueue(Data(static_cast<FlowId>(rng.NextBelow(3)), ms), Millis(ms));
    }
    if (rng.NextBelow(3) != 0) {
      ++opportunities;
      if (auto p = link.OnDeliveryOpportunity(Millis(ms))) delivered_bytes += p->size_bytes;
    }
    for (const auto& [flow, c] : link.AllCounters()) ASSERT_TRUE(c.Conserved()) << flow;
  }
  std::uint64_t drops = 0, queued = 0;
  for (const auto& [flow, c] : link.AllCounters()) {
    drops += c.aqm_drops;
    queued += c.queued;
  }
  EXPECT_GT(drops, 0u);
  EXPECT_EQ(queued, link.QueueLength());
  EXPECT_LE(delivered_bytes, opportunities * 1500);
}

TEST(BottleneckLink, AqmDropsDoNotConsumeTheOpportunity) {
  LinkConfig cfg;
  cfg.aqm = AqmKind::kCodel;
  BottleneckLink link(cfg, 1);
  for (int i = 0; i < 200; ++i) link.Enqueue(Data(0, i), Micros(0));
  // Sojourn is far above target from the first dequeue on; every opportunity
  // must still forward a packet while the queue holds more than one MTU.
  for (int ms = 0; ms < 150; ++ms) {
    ASSERT_TRUE(link.OnDeliveryOpportunity(Millis(300 + ms)).has_value()) << ms;
  }
  EXPECT_GT(link.Counters(0).aqm_drops, 0u);
}

TEST(Codel, NeverDropsBelowTarget) {
  CodelState s;
  CodelParams p;
  for (int ms = 0; ms < 5000; ++ms) {
    EXPECT_EQ(CodelDecide(s, p, Micros(4999), Millis(ms)), CodelVerdict::kKeep);
  }
}

TEST(Codel, PersistentSojournFollowsControlLaw) {
  CodelState s;
  CodelParams p;
  std::vector<SimTime> drops;
  for (std::int64_t us = 0; us <= 600000; us += 100) {
    if (CodelDecide(s, p, Millis(20), Micros(us)) == CodelVerdict::kDrop) drops.push_back(Micros(us));
  }
  ASSERT_GE(drops.size(), 5u);
  EXPECT_EQ(drops[0], Millis(100));  // first_above_time
  EXPECT_EQ(drops[1], Millis(200));  // interval / sqrt(1)
  for (std::size_t k = 2; k < drops.size(); ++k) {
    // interval / sqrt(k), sampled on a 100 us grid
    const double gap = static_cast<double>((drops[k] - drops[k - 1]).count());
    EXPECT_NEAR(gap, 100000.0 / std::sqrt(static_cast<double>(k)), 100.0) << k;
  }
  EXPECT_NEAR(static_cast<double>((drops[2] - drops[1]).count()), 70710.7, 100.0);
}

TEST(Codel, DipBelowTargetDisarms) {
  CodelState s;
  CodelParams p;
  EXPECT_EQ(CodelDecide(s, p, Millis(10), Millis(0)), CodelVerdict::kKeep);
  EXPECT_TRUE(s.first_above_time.has_value());
  EXPECT_EQ(CodelDecide(s, p, Millis(10), Millis(50)), CodelVerdict::kKeep);
  EXPECT_EQ(CodelDecide(s, p, Millis(1), Millis(60)), CodelVerdict::kKeep);
  EXPECT_FALSE(s.first_above_time.has_value());
  EXPECT_EQ(CodelDecide(s, p, Millis(10), Millis(110)), CodelVerdict::kKeep);
  EXPECT_EQ(CodelDecide(s, p, Millis(10), Millis(200)), CodelVerdict::kKeep);
  EXPECT_EQ(CodelDecide(s, p, Millis(10), Millis(210)), CodelVerdict::kDrop);
}

TEST(Codel, SmallBacklogIsNeverDropped) {
  CodelState s;
  CodelParams p;
  for (int ms = 0; ms < 1000; ++ms) {
    EXPECT_EQ(CodelDecide(s, p, Millis(50), Millis(ms), false), CodelVerdict::kKeep);
  }
}

TEST(Codel, ReentryResumesNearPreviousRate) {
  CodelState s;
  CodelParams p;
  std::int64_t us = 0;
  for (; us <= 800000; us += 1000) CodelDecide(s, p, Millis(20), Micros(us));
  const std::uint32_t count_before = s.count;
  const std::uint32_t last_before = s.last_count;
  ASSERT_GT(count_before - last_before, 1u);
  CodelDecide(s, p, Millis(1), Micros(us));  // leave dropping
  EXPECT_FALSE(s.dropping);
  us += 1000;
  for (; !s.dropping; us += 1000) CodelDecide(s, p, Millis(20), Micros(us));
  EXPECT_EQ(s.count, count_before - last_before);
}

TEST(Codel, LateReentryStartsOver) {
  CodelState s;
  CodelParams p;
  std::int64_t us = 0;
  for (; us <= 800000; us += 1000) CodelDecide(s, p, Millis(20), Micros(us));
  CodelDecide(s, p, Millis(1), Micros(us));
  us += Seconds(5).count();
  for (; !s.dropping; us += 1000) CodelDecide(s, p, Millis(20), Micros(us));
  EXPECT_EQ(s.count, 1u);
}

}  // namespace
}  // namespace c2lab
