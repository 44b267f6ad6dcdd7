#include "c2lab/cc/congestion_controller.h"

#include <algorithm>
#include <stdexcept>

namespace c2lab {

void LossBackoff(CongestionController& cc, LossKind kind, CwndState& w) {
  w.ssthresh = std::max(1.0, cc.RecalcSsthresh(w));
  w.cwnd = kind == LossKind::kRto ? 1.0 : std::max(1.0, w.ssthresh);
}

void CongestionController::OnDupackLoss(CwndState& w) { LossBackoff(*this, LossKind::kDupack, w); }

void CongestionController::OnRto(CwndState& w) { LossBackoff(*this, LossKind::kRto, w); }

void CheckWindowFloor(const CwndState& w) {
  if (!(w.cwnd >= 1.0)) throw std::logic_error("congestion window fell below one segment");
}

}  // namespace c2lab
