#include "c2lab/c2tcp/c2tcp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2lab {

void SetTarget(C2tcpConfig& cfg, SimTime target) {
  if (target.count() <= 0) throw std::invalid_argument("c2tcp target must be positive");
  cfg.target = target;
}

void SetInterval(C2tcpConfig& cfg, SimTime interval) {
  if (interval.count() <= 0) throw std::invalid_argument("c2tcp interval must be positive");
  cfg.interval = interval;
}

SimTime BackoffWindow(SimTime interval, std::uint32_t num_backoffs) {
  const double us =
      static_cast<double>(interval.count()) / std::sqrt(static_cast<double>(num_backoffs));
  return SimTime(std::llround(us));
}

C2tcpBranch C2tcpOnAck(const AckSample& s, CwndState& w, const C2tcpConfig& cfg,
                       ConditionState& st, const SsthreshRecalc& recalc_ssthresh) {
  if (s.rtt < cfg.target) {
    // Like the base controllers, no window growth while repairing a loss.
    if (!w.in_recovery) {
      w.cwnd += static_cast<double>(cfg.target.count()) / static_cast<double>(s.rtt.count());
    }
    st.first_time = true;
    st.num_backoffs = 1;
    return C2tcpBranch::kGood;
  }
  if (st.first_time) {
    st.next_time = s.now + cfg.interval;
    st.first_time = false;
    return C2tcpBranch::kArm;
  }
  if (s.now > *st.next_time) {
    st.next_time = s.now + BackoffWindow(cfg.interval, st.num_backoffs);
    ++st.num_backoffs;
    w.ssthresh = std::max(1.0, recalc_ssthresh(w));
    w.cwnd = 1.0;
    return C2tcpBranch::kBackoff;
  }
  return C2tcpBranch::kHold;
}

C2tcp::C2tcp(std::unique_ptr<CongestionController> base, C2tcpConfig cfg)
    : base_(std::move(base)), cfg_(std::move(cfg)) {
  if (!base_) throw std::invalid_argument("c2tcp needs a base controller");
  c2lab::SetTarget(cfg_, cfg_.target);
  c2lab::SetInterval(cfg_, cfg_.interval);
}

void C2tcp::OnAck(const AckSample& sample, CwndState& w) {
  base_->OnAck(sample, w);
  const C2tcpBranch branch = C2tcpOnAck(sample, w, cfg_, state_,
                                        [this](CwndState& ws) { return base_->RecalcSsthresh(ws); });
  last_branch_ = branch;
  ++branch_counts_[static_cast<std::size_t>(branch)];
  ++acks_seen_;
}

}  // namespace c2lab
