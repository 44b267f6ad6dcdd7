#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "c2lab/c2tcp/c2tcp.h"
#include "c2lab/cc/cubic.h"
#include "c2lab/cc/newreno.h"
#include "c2lab/sim/rng.h"
#include "support/per_ack_oracle.h"

namespace c2lab {
namespace {

AckSample Ack(SimTime rtt, SimTime now) {
  AckSample s;
  s.rtt = rtt;
  s.now = now;
  return s;
}

double Halve(CwndState& w) { return w.cwnd / 2.0; }

C2tcpConfig Config(int target_ms = 100, int interval_ms = 100) {
  C2tcpConfig cfg;
  SetTarget(cfg, Millis(target_ms));
  SetInterval(cfg, Millis(interval_ms));
  return cfg;
}

// Mirrors the oracle's base block so the two can be compared exactly.
class ReciprocalBase : public CongestionController {
 public:
  std::string Name() const override { return "reciprocal"; }
  void OnAck(const AckSample&, CwndState& w) override { w.cwnd += 1.0 / w.cwnd; }
  double RecalcSsthresh(CwndState& w) override { return w.cwnd / 2.0; }
};

TEST(C2tcpOnAck, GoodConditionBoost) {
  CwndState w;
  ConditionState st;
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(50), Seconds(1)), w, Config(), st, Halve), C2tcpBranch::kGood);
  EXPECT_DOUBLE_EQ(w.cwnd, 12.0);
  EXPECT_TRUE(st.first_time);
  EXPECT_EQ(st.num_backoffs, 1u);
}

TEST(C2tcpOnAck, RttEqualToTargetIsNotGood) {
  CwndState w;
  ConditionState st;
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(100), Seconds(1)), w, Config(), st, Halve), C2tcpBranch::kArm);
  EXPECT_DOUBLE_EQ(w.cwnd, 10.0);
}

TEST(C2tcpOnAck, FirstAboveTargetArmsWindow) {
  CwndState w;
  ConditionState st;
  const SimTime t = Millis(1234);
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(150), t), w, Config(), st, Halve), C2tcpBranch::kArm);
  EXPECT_FALSE(st.first_time);
  ASSERT_TRUE(st.next_time.has_value());
  EXPECT_EQ(*st.next_time, t + Millis(100));
  EXPECT_DOUBLE_EQ(w.cwnd, 10.0);
}

TEST(C2tcpOnAck, BackoffSequenceShrinksWindow) {
  CwndState w;
  w.cwnd = 40;
  ConditionState st;
  const auto cfg = Config();
  C2tcpOnAck(Ack(Millis(150), Millis(0)), w, cfg, st, Halve);
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(150), Millis(100)), w, cfg, st, Halve), C2tcpBranch::kHold);
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(150), Micros(100001)), w, cfg, st, Halve),
            C2tcpBranch::kBackoff);
  EXPECT_DOUBLE_EQ(w.cwnd, 1.0);
  EXPECT_DOUBLE_EQ(w.ssthresh, 20.0);
  EXPECT_EQ(st.num_backoffs, 2u);
  EXPECT_EQ(*st.next_time, Micros(100001) + Millis(100));
  // Next window spans 100/sqrt(2) ms.
  const SimTime second = Micros(200002);
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(150), second), w, cfg, st, Halve), C2tcpBranch::kBackoff);
  EXPECT_EQ(*st.next_time, second + Micros(70711));
  EXPECT_EQ(st.num_backoffs, 3u);
  EXPECT_EQ(BackoffWindow(Millis(100), 2), Micros(70711));
}

TEST(C2tcpOnAck, DeadlineItselfIsNotExpired) {
  CwndState w;
  ConditionState st;
  const auto cfg = Config();
  C2tcpOnAck(Ack(Millis(150), Millis(0)), w, cfg, st, Halve);
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(150), Millis(100)), w, cfg, st, Halve), C2tcpBranch::kHold);
}

TEST(C2tcpOnAck, SubTargetRttResetsHistory) {
  CwndState w;
  ConditionState st;
  const auto cfg = Config();
  C2tcpOnAck(Ack(Millis(150), Millis(0)), w, cfg, st, Halve);
  C2tcpOnAck(Ack(Millis(150), Millis(101)), w, cfg, st, Halve);
  ASSERT_EQ(st.num_backoffs, 2u);
  C2tcpOnAck(Ack(Millis(60), Millis(102)), w, cfg, st, Halve);
  EXPECT_TRUE(st.first_time);
  EXPECT_EQ(st.num_backoffs, 1u);
}

// The good/bad timeline: two identical above-target excursions of 150 ms,
// classified differently depending on the preceding history.
TEST(C2tcpOnAck, HistoryDecidesBadCondition) {
  const auto cfg = Config();
  auto excursion = [&](ConditionState& st, CwndState& w, SimTime start) {
    int backoffs = 0;
    for (SimTime t = start; t <= start + Millis(150); t += Millis(5)) {
      backoffs += C2tcpOnAck(Ack(Millis(130), t), w, cfg, st, Halve) == C2tcpBranch::kBackoff;
    }
    return backoffs;
  };
  // t0..t1: above target for longer than an interval -> bad condition.
  ConditionState a;
  CwndState wa;
  EXPECT_EQ(excursion(a, wa, Millis(0)), 1);

  // Same excursion, but a sub-target RTT at t4 < t3 + interval keeps the
  // connection in good condition.
  ConditionState b;
  CwndState wb;
  int backoffs = 0;
  for (SimTime t = Millis(0); t <= Millis(150); t += Millis(5)) {
    const SimTime rtt = t == Millis(80) ? Millis(90) : Millis(130);
    backoffs += C2tcpOnAck(Ack(rtt, t), wb, cfg, b, Halve) == C2tcpBranch::kBackoff;
  }
  EXPECT_EQ(backoffs, 0);
}

TEST(C2tcpOnAck, NoBoostDuringLossRecovery) {
  CwndState w;
  w.in_recovery = true;
  ConditionState st;
  st.first_time = false;
  st.num_backoffs = 3;
  EXPECT_EQ(C2tcpOnAck(Ack(Millis(50), Seconds(1)), w, Config(), st, Halve), C2tcpBranch::kGood);
  EXPECT_DOUBLE_EQ(w.cwnd, 10.0);
  EXPECT_TRUE(st.first_time);
  EXPECT_EQ(st.num_backoffs, 1u);
}

TEST(C2tcpConfig, RejectsNonPositive) {
  C2tcpConfig cfg;
  EXPECT_THROW(SetTarget(cfg, Micros(0)), std::invalid_argument);
  EXPECT_THROW(SetInterval(cfg, Micros(-1)), std::invalid_argument);
  EXPECT_THROW(C2tcp(std::make_unique<NewReno>(), C2tcpConfig{Micros(0), Millis(100), "newreno"}),
               std::invalid_argument);
  EXPECT_THROW(C2tcp(nullptr, C2tcpConfig{}), std::invalid_argument);
}

TEST(C2tcp, BaseRunsBeforeOverlay) {
  C2tcp cc(std::make_unique<NewReno>(), Config());
  CwndState w;  // slow start: base adds 1, overlay adds 100/50
  cc.OnAck(Ack(Millis(50), Seconds(1)), w);
  EXPECT_DOUBLE_EQ(w.cwnd, 13.0);
  EXPECT_EQ(cc.Name(), "c2tcp+newreno");
}

TEST(C2tcp, BackoffUsesBaseSsthreshRule) {
  for (bool cubic : {false, true}) {
    std::unique_ptr<CongestionController> base;
    if (cubic) {
      base = std::make_unique<Cubic>();
    } else {
      base = std::make_unique<NewReno>();
    }
    C2tcp cc(std::move(base), Config());
    CwndState w;
    w.cwnd = 40;
    w.ssthresh = 40;
    w.in_recovery = true;  // freeze base growth to isolate the overlay
    cc.OnAck(Ack(Millis(150), Millis(0)), w);
    cc.OnAck(Ack(Millis(150), Millis(101)), w);
    EXPECT_EQ(cc.last_branch(), C2tcpBranch::kBackoff);
    EXPECT_DOUBLE_EQ(w.cwnd, 1.0);
    EXPECT_DOUBLE_EQ(w.ssthresh, cubic ? 28.0 : 20.0);
    EXPECT_TRUE(w.InSlowStart());
  }
}

TEST(C2tcp, SetTargetTakesEffectOnNextAck) {
  C2tcp cc(std::make_unique<ReciprocalBase>(), Config());
  CwndState w;
  cc.OnAck(Ack(Millis(60), Millis(0)), w);
  EXPECT_EQ(cc.last_branch(), C2tcpBranch::kGood);
  cc.SetTarget(Millis(50));
  cc.OnAck(Ack(Millis(60), Millis(1)), w);
  EXPECT_EQ(cc.last_branch(), C2tcpBranch::kArm);
  cc.SetInterval(Millis(200));
  cc.OnAck(Ack(Millis(60), Millis(150)), w);
  EXPECT_EQ(cc.last_branch(), C2tcpBranch::kBackoff);  // armed window was 100 ms from t=1
  EXPECT_EQ(*cc.condition().next_time, Millis(350));
  EXPECT_THROW(cc.SetTarget(Millis(0)), std::invalid_argument);
}

TEST(C2tcp, MatchesReferenceInterpreter) {
  SeededRng rng(99);
  for (int stream = 0; stream < 500; ++stream) {
    const std::int64_t target = 50000 * (1 + stream % 4);
    const std::int64_t interval = 25000 * (1 + stream % 8);
    C2tcp cc(std::make_unique<ReciprocalBase>(), Config(static_cast<int>(target / 1000),
                                                        static_cast<int>(interval / 1000)));
    CwndState w;
    oracle::State o;
    std::int64_t now = 0;
    for (int i = 0; i < 300; ++i) {
      now += 1000 * static_cast<std::int64_t>(rng.NextBelow(30));
      const std::int64_t rtt = 1 + static_cast<std::int64_t>(rng.NextBelow(2 * target));
      cc.OnAck(Ack(Micros(rtt), Micros(now)), w);
      oracle::PktsAcked(o, rtt, now, target, interval);
      ASSERT_EQ(w.cwnd, o.cwnd) << stream << ":" << i;
      ASSERT_EQ(cc.condition().first_time, o.first_time);
      ASSERT_EQ(cc.condition().num_backoffs, o.num_backoffs);
      if (!o.first_time) ASSERT_EQ(cc.condition().next_time->count(), o.next_time);
    }
  }
}

TEST(C2tcp, ExactlyOneBranchPerAck) {
  SeededRng rng(5);
  C2tcp cc(std::make_unique<Cubic>(), Config());
  CwndState w;
  SimTime now{0};
  for (int i = 0; i < 20000; ++i) {
    now += Micros(static_cast<std::int64_t>(rng.NextBelow(3000)));
    cc.OnAck(Ack(Micros(1 + static_cast<std::int64_t>(rng.NextBelow(250000))), now), w);
    const auto& c = cc.branch_counts();
    ASSERT_EQ(c[0] + c[1] + c[2] + c[3], cc.acks_seen());
    ASSERT_GE(w.cwnd, 1.0);
    ASSERT_GE(cc.condition().num_backoffs, 1u);
  }
}

TEST(C2tcp, ConsecutiveBackoffsRespectSqrtSpacing) {
  C2tcp cc(std::make_unique<NewReno>(), Config());
  CwndState w;
  std::vector<SimTime> resets;
  for (SimTime now{0}; now < Seconds(3); now += Micros(700)) {
    cc.OnAck(Ack(Millis(300), now), w);
    if (cc.last_branch() == C2tcpBranch::kBackoff) resets.push_back(now);
  }
  ASSERT_GE(resets.size(), 11u);
  for (std::size_t k = 1; k < resets.size(); ++k) {
    const SimTime gap = resets[k] - resets[k - 1];
    EXPECT_GE(gap, BackoffWindow(Millis(100), static_cast<std::uint32_t>(k)));
    EXPECT_LE(gap, BackoffWindow(Millis(100), static_cast<std::uint32_t>(k)) + Micros(700));
  }
}

}  // namespace
}  // namespace c2lab
