#include "c2lab/cc/vegas.h"

#include <algorithm>

namespace c2lab {

double VegasDiff(double cwnd, SimTime rtt, SimTime base_rtt) {
  const double r = static_cast<double>(rtt.count());
  return cwnd * (r - static_cast<double>(base_rtt.count())) / r;
}

double VegasAdjust(double cwnd, SimTime rtt, SimTime base_rtt) {
  const double diff = VegasDiff(cwnd, rtt, base_rtt);
  if (diff < kVegasAlpha) return cwnd + 1.0;
  if (diff > kVegasBeta) return std::max(1.0, cwnd - 1.0);
  return cwnd;
}

void Vegas::OnAck(const AckSample& sample, CwndState& w) {
  round_min_rtt_ = std::min(round_min_rtt_, sample.rtt);
  if (w.in_recovery) return;

  if (sample.acked_seq >= round_end_seq_) {
    const SimTime base = w.min_rtt.count() > 0 ? w.min_rtt : sample.rtt;
    if (round_min_rtt_ != SimTime::max()) {
      if (w.InSlowStart()) {
        if (VegasDiff(w.cwnd, round_min_rtt_, base) > kVegasGamma) {
          const double expected = w.cwnd * static_cast<double>(base.count()) /
                                  static_cast<double>(round_min_rtt_.count());
          w.cwnd = std::max(1.0, std::min(w.cwnd, expected + 1.0));
          w.ssthresh = std::max(1.0, w.cwnd - 1.0);
        }
      } else {
        w.cwnd = VegasAdjust(w.cwnd, round_min_rtt_, base);
        // Keep a shrinking window out of slow start.
        w.ssthresh = std::min(w.ssthresh, std::max(1.0, w.cwnd - 1.0));
      }
    }
    round_end_seq_ = w.snd_nxt;
    round_min_rtt_ = SimTime::max();
  }

  if (w.InSlowStart()) w.cwnd += sample.newly_acked_count;
}

}  // namespace c2lab
