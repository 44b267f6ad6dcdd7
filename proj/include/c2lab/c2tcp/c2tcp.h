#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "c2lab/cc/congestion_controller.h"

namespace c2lab {

struct C2tcpConfig {
  SimTime target = Millis(100);
  SimTime interval = Millis(100);
  std::string base_algorithm = "cubic";
};

/// Both throw std::invalid_argument for non-positive values.
void SetTarget(C2tcpConfig& cfg, SimTime target);
void SetInterval(C2tcpConfig& cfg, SimTime interval);

/// Delay-condition tracker. `num_backoffs` counts consecutive window resets
/// since the current bad condition began, starting from 1.
struct ConditionState {
  bool first_time = true;
  std::optional<SimTime> next_time;
  std::uint32_t num_backoffs = 1;
};

/// Which arm of the per-ack decision ran.
enum class C2tcpBranch : std::uint8_t {
  kGood = 0,     // rtt < target: additive boost of target/rtt
  kArm = 1,      // first above-target rtt: open a monitoring window
  kBackoff = 2,  // window expired with no sub-target rtt: reset cwnd to 1
  kHold = 3,     // inside an armed window: leave cwnd to the base controller
};

using SsthreshRecalc = std::function<double(CwndState&)>;

/// Runs the overlay for one ack, after the base controller's own ack
/// processing. Exactly one branch executes.
C2tcpBranch C2tcpOnAck(const AckSample& sample, CwndState& w, const C2tcpConfig& cfg,
                       ConditionState& st, const SsthreshRecalc& recalc_ssthresh);

/// interval / sqrt(num_backoffs), rounded to the nearest microsecond.
SimTime BackoffWindow(SimTime interval, std::uint32_t num_backoffs);

/// Wraps a loss-based controller. Loss and timeout handling are the base
/// controller's; every ack additionally passes through C2tcpOnAck.
class C2tcp : public CongestionController {
 public:
  C2tcp(std::unique_ptr<CongestionController> base, C2tcpConfig cfg);

  std::string Name() const override { return "c2tcp+" + base_->Name(); }
  void OnAck(const AckSample& sample, CwndState& w) override;
  void OnDupackLoss(CwndState& w) override { base_->OnDupackLoss(w); }
  void OnRto(CwndState& w) override { base_->OnRto(w); }
  void OnSent(CwndState& w) override { base_->OnSent(w); }
  double RecalcSsthresh(CwndState& w) override { return base_->RecalcSsthresh(w); }

  /// Take effect from the next ack.
  void SetTarget(SimTime target) { c2lab::SetTarget(cfg_, target); }
  void SetInterval(SimTime interval) { c2lab::SetInterval(cfg_, interval); }

  const C2tcpConfig& config() const { return cfg_; }
  const ConditionState& condition() const { return state_; }
  const CongestionController& base() const { return *base_; }
  std::optional<C2tcpBranch> last_branch() const { return last_branch_; }
  const std::array<std::uint64_t, 4>& branch_counts() const { return branch_counts_; }
  std::uint64_t acks_seen() const { return acks_seen_; }

 private:
  std::unique_ptr<CongestionController> base_;
  C2tcpConfig cfg_;
  ConditionState state_;
  std::optional<C2tcpBranch> last_branch_;
  std::array<std::uint64_t, 4> branch_counts_{};
  std::uint64_t acks_seen_ = 0;
};

}  // namespace c2lab
