#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "c2lab/sim/sim_time.h"

namespace c2lab {

/// One newly acknowledged packet as seen by the sender.
struct AckSample {
  std::uint64_t acked_seq = 0;
  SimTime rtt{0};  // measured for this packet's transmission; always > 0
  SimTime now{0};
  std::uint32_t newly_acked_count = 1;
};

inline constexpr double kInitialSsthresh = 1e9;

/// Window state shared between the sender and its controller. Windows are in
/// segments; cwnd may be fractional and the sender keeps at most ceil(cwnd)
/// packets in flight.
struct CwndState {
  double cwnd = 10.0;
  double ssthresh = kInitialSsthresh;
  std::uint64_t in_flight = 0;
  SimTime srtt{0};
  SimTime rttvar{0};
  SimTime min_rtt{0};  // lifetime minimum; zero until the first sample
  bool in_recovery = false;
  std::uint64_t snd_nxt = 0;  // next new sequence number the sender will use

  bool InSlowStart() const { return cwnd < ssthresh; }
};

/// Behavioral contract for a window-based congestion controller.
///
/// The sender calls OnDupackLoss once per recovery episode, before OnAck for
/// the ack that revealed the loss. OnAck runs for every newly acked packet,
/// including during recovery. No hook may leave cwnd below one segment.
class CongestionController {
 public:
  virtual ~CongestionController() = default;

  virtual std::string Name() const = 0;

  virtual void OnAck(const AckSample& sample, CwndState& w) = 0;
  virtual void OnDupackLoss(CwndState& w);
  virtual void OnRto(CwndState& w);
  virtual void OnSent(CwndState& /*w*/) {}

  /// The controller's loss-time ssthresh rule applied to the current window.
  /// May update internal state (for Cubic, w_max and the growth epoch).
  virtual double RecalcSsthresh(CwndState& w) = 0;
};

/// Shared loss response: dupack loss sets cwnd = ssthresh = RecalcSsthresh();
/// RTO sets ssthresh the same way and cwnd = 1. Both respect the 1-segment
/// floor.
enum class LossKind { kDupack, kRto };
void LossBackoff(CongestionController& cc, LossKind kind, CwndState& w);

/// Rejects windows below one segment with std::logic_error.
void CheckWindowFloor(const CwndState& w);

}  // namespace c2lab
