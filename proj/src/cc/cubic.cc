#include "c2lab/cc/cubic.h"

#include <algorithm>
#include <cmath>

namespace c2lab {

double CubicK(double w_max) { return std::cbrt(w_max * (1.0 - kCubicBeta) / kCubicC); }

double CubicWindow(double t_seconds, double w_max) {
  const double d = t_seconds - CubicK(w_max);
  return kCubicC * d * d * d + w_max;
}

void Cubic::OnAck(const AckSample& sample, CwndState& w) {
  if (w.in_recovery) return;
  const double n = sample.newly_acked_count;
  if (w.InSlowStart()) {
    w.cwnd += n;
    return;
  }
  if (!epoch_start_) {
    epoch_start_ = sample.now;
    epoch_cwnd_ = w.cwnd;
    if (w.cwnd < w_max_) {
      origin_ = w_max_;
      k_ = std::cbrt((w_max_ - w.cwnd) / kCubicC);
    } else {
      origin_ = w.cwnd;
      k_ = 0.0;
    }
  }
  const SimTime rtt = w.min_rtt.count() > 0 ? w.min_rtt : sample.rtt;
  // Aim one RTT ahead on the cubic curve.
  const double t = ToSeconds(sample.now - *epoch_start_ + rtt);
  const double d = t - k_;
  double target = origin_ + kCubicC * d * d * d;

  // TCP-friendly estimate of a Reno flow with the same decrease factor.
  const SimTime srtt = w.srtt.count() > 0 ? w.srtt : sample.rtt;
  const double elapsed_rtts = ToSeconds(sample.now - *epoch_start_) / ToSeconds(srtt);
  const double w_est =
      epoch_cwnd_ + 3.0 * (1.0 - kCubicBeta) / (1.0 + kCubicBeta) * elapsed_rtts;
  target = std::max(target, w_est);

  // Growth per RTT is capped at 50%.
  target = std::min(target, 1.5 * w.cwnd);
  if (target > w.cwnd) {
    w.cwnd += n * (target - w.cwnd) / w.cwnd;
  } else {
    w.cwnd += n * 0.01 / w.cwnd;
  }
}

double Cubic::RecalcSsthresh(CwndState& w) {
  epoch_start_.reset();
  // Fast convergence: yield headroom when the plateau keeps shrinking.
  if (w.cwnd < w_max_) {
    w_max_ = w.cwnd * (1.0 + kCubicBeta) / 2.0;
  } else {
    w_max_ = w.cwnd;
  }
  return w.cwnd * kCubicBeta;
}

}  // namespace c2lab
