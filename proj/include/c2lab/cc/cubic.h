#pragma once

#include <optional>

#include "c2lab/cc/congestion_controller.h"

namespace c2lab {

inline constexpr double kCubicC = 0.4;     // segments / s^3
inline constexpr double kCubicBeta = 0.7;  // multiplicative decrease factor

/// Time in seconds for the cubic curve to climb from beta*w_max back to w_max.
double CubicK(double w_max);

/// C*(t-K)^3 + w_max, with K = CubicK(w_max).
double CubicWindow(double t_seconds, double w_max);

/// Cubic window growth with the TCP-friendly region and fast convergence.
/// Slow start is plain (no HyStart).
class Cubic : public CongestionController {
 public:
  std::string Name() const override { return "cubic"; }
  void OnAck(const AckSample& sample, CwndState& w) override;
  double RecalcSsthresh(CwndState& w) override;

  double w_max() const { return w_max_; }
  bool epoch_started() const { return epoch_start_.has_value(); }

 private:
  double w_max_ = 0.0;
  std::optional<SimTime> epoch_start_;
  double origin_ = 0.0;  // plateau the current epoch grows towards
  double k_ = 0.0;       // seconds from epoch start to the plateau
  double epoch_cwnd_ = 0.0;
};

}  // namespace c2lab
