#pragma once

#include <limits>

#include "c2lab/cc/congestion_controller.h"

namespace c2lab {

inline constexpr double kVegasAlpha = 2.0;  // segments
inline constexpr double kVegasBeta = 4.0;
inline constexpr double kVegasGamma = 1.0;  // slow-start exit threshold

/// Queued-segment estimate: cwnd * (rtt - base_rtt) / rtt.
double VegasDiff(double cwnd, SimTime rtt, SimTime base_rtt);

/// One per-RTT Vegas adjustment: +1 below alpha, -1 above beta, else hold.
double VegasAdjust(double cwnd, SimTime rtt, SimTime base_rtt);

/// Delay-based controller. Once per round trip it compares the smallest RTT
/// sampled in that round against the lifetime minimum. Loss falls back to
/// halving.
class Vegas : public CongestionController {
 public:
  std::string Name() const override { return "vegas"; }
  void OnAck(const AckSample& sample, CwndState& w) override;
  double RecalcSsthresh(CwndState& w) override { return w.cwnd / 2.0; }

 private:
  std::uint64_t round_end_seq_ = 0;
  SimTime round_min_rtt_ = SimTime::max();
};

}  // namespace c2lab
