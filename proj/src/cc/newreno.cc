#include "c2lab/cc/newreno.h"

namespace c2lab {

void NewReno::OnAck(const AckSample& sample, CwndState& w) {
  if (w.in_recovery) return;
  const double n = sample.newly_acked_count;
  if (w.InSlowStart()) {
    w.cwnd += n;
  } else {
    w.cwnd += n / w.cwnd;
  }
}

}  // namespace c2lab
