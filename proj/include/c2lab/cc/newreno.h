#pragma once

#include "c2lab/cc/congestion_controller.h"

namespace c2lab {

/// Slow start and additive increase; halves on loss. Window growth is frozen
/// while the sender is in loss recovery.
class NewReno : public CongestionController {
 public:
  std::string Name() const override { return "newreno"; }
  void OnAck(const AckSample& sample, CwndState& w) override;
  double RecalcSsthresh(CwndState& w) override { return w.cwnd / 2.0; }
};

}  // namespace c2lab
