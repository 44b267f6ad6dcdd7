#include "c2lab/scenario/bulk_flow.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c2lab {

BulkSender::BulkSender(FlowId flow, EntityId entity, std::unique_ptr<CongestionController> cc,
                       EventLoop& loop, TransmitFn transmit)
    : flow_(flow), entity_(entity), cc_(std::move(cc)), loop_(loop),
      transmit_(std::move(transmit)) {
  if (!cc_) throw std::invalid_argument("sender needs a congestion controller");
}

void BulkSender::Start() {
  started_ = true;
  TrySend();
}

void BulkSender::TrySend() {
  if (!started_) return;
  while (static_cast<double>(pipe_) < std::ceil(w_.cwnd)) {
    if (!lost_pending_.empty()) {
      const std::uint64_t seq = *lost_pending_.begin();
      lost_pending_.erase(lost_pending_.begin());
      SendSeq(seq, true);
    } else {
      SendSeq(snd_nxt_, false);
    }
  }
}

void BulkSender::SendSeq(std::uint64_t seq, bool retransmit) {
  const SimTime now = loop_.Now();
  if (retransmit) {
    SeqInfo& info = window_[seq - snd_una_];
    info.state = SeqState::kRetransmitted;
    info.last_sent = now;
    retx_in_flight_.insert(seq);
    ++retransmissions_;
  } else {
    window_.push_back({SeqState::kOutstanding, now, now});
    ++snd_nxt_;
    w_.snd_nxt = snd_nxt_;
  }
  ++pipe_;
  ++transmissions_;
  w_.in_flight = pipe_;

  Packet pkt;
  pkt.flow_id = flow_;
  pkt.seq = seq;
  pkt.size_bytes = kDataPacketBytes;
  pkt.sent_at = now;
  pkt.first_sent_at = window_[seq - snd_una_].first_sent;
  cc_->OnSent(w_);
  if (!rto_deadline_) ArmRto();
  transmit_(pkt);
}

void BulkSender::OnAck(const Packet& ack) {
  const SimTime now = loop_.Now();
  if (ack.seq < snd_una_) return;  // duplicate of an already-acked packet
  SeqInfo& info = window_.at(ack.seq - snd_una_);
  if (info.state == SeqState::kAcked) return;

  // The echo identifies the exact transmission, so retransmissions give
  // unambiguous samples.
  const SimTime rtt = std::max(Micros(1), now - ack.echo_sent_at);
  UpdateRtt(rtt);

  if (info.state == SeqState::kOutstanding || info.state == SeqState::kRetransmitted) --pipe_;
  if (info.state == SeqState::kLost) lost_pending_.erase(ack.seq);
  if (info.state == SeqState::kRetransmitted) retx_in_flight_.erase(ack.seq);
  info.state = SeqState::kAcked;
  ++acked_packets_;
  if (!any_acked_ || ack.seq > highest_acked_) highest_acked_ = ack.seq;
  any_acked_ = true;

  const std::uint64_t old_una = snd_una_;
  while (!window_.empty() && window_.front().state == SeqState::kAcked) {
    window_.pop_front();
    ++snd_una_;
  }

  const bool new_loss = DetectLosses(ack.echo_sent_at);
  if (in_recovery_ && snd_una_ > recovery_point_) in_recovery_ = false;
  if (new_loss && !in_recovery_) {
    in_recovery_ = true;
    recovery_point_ = snd_nxt_ - 1;
    w_.in_recovery = true;
    cc_->OnDupackLoss(w_);
    ++loss_events_;
  }
  w_.in_recovery = in_recovery_;
  w_.in_flight = pipe_;

  AckSample sample;
  sample.acked_seq = ack.seq;
  sample.rtt = rtt;
  sample.now = now;
  sample.newly_acked_count = 1;
  cc_->OnAck(sample, w_);
  CheckWindowFloor(w_);

  // The timer restarts only on cumulative progress, so a stuck hole still
  // times out while later packets keep getting acked.
  if (window_.empty()) {
    rto_deadline_.reset();
  } else if (snd_una_ != old_una) {
    ArmRto();
  }
  TrySend();
}

void BulkSender::UpdateRtt(SimTime rtt) {
  if (!have_rtt_) {
    w_.srtt = rtt;
    w_.rttvar = rtt / 2;
    w_.min_rtt = rtt;
    have_rtt_ = true;
  } else {
    const SimTime err = w_.srtt > rtt ? w_.srtt - rtt : rtt - w_.srtt;
    w_.rttvar = (3 * w_.rttvar + err) / 4;
    w_.srtt = (7 * w_.srtt + rtt) / 8;
    w_.min_rtt = std::min(w_.min_rtt, rtt);
  }
  rto_ = std::clamp(w_.srtt + 4 * w_.rttvar, kMinRto, kMaxRto);
  rto_backoff_ = 1;
}

bool BulkSender::DetectLosses(SimTime acked_sent_at) {
  bool found = false;
  // The path never reorders, so a retransmission is lost once anything sent
  // after it has been acked.
  for (auto it = retx_in_flight_.begin(); it != retx_in_flight_.end();) {
    SeqInfo& info = window_[*it - snd_una_];
    if (info.last_sent < acked_sent_at) {
      info.state = SeqState::kLost;
      --pipe_;
      lost_pending_.insert(*it);
      it = retx_in_flight_.erase(it);
      found = true;
    } else {
      ++it;
    }
  }
  if (!any_acked_ || highest_acked_ < kDupThresh) return found;
  const std::uint64_t limit = highest_acked_ - kDupThresh;  // inclusive
  for (std::uint64_t seq = std::max(loss_scan_, snd_una_); seq <= limit; ++seq) {
    SeqInfo& info = window_[seq - snd_una_];
    if (info.state == SeqState::kOutstanding) {
      info.state = SeqState::kLost;
      --pipe_;
      lost_pending_.insert(seq);
      found = true;
    }
  }
  loss_scan_ = std::max(loss_scan_, limit + 1);
  return found;
}

void BulkSender::ArmRto() {
  const SimTime timeout =
      std::min(kMaxRto, rto_ * static_cast<std::int64_t>(rto_backoff_));
  rto_deadline_ = loop_.Now() + timeout;
  if (timer_pending_) return;
  timer_pending_ = true;
  loop_.Schedule(Event{*rto_deadline_, entity_, EventKind::kTimerExpiry, ++timer_generation_},
                 [this] { OnRtoTimer(); });
}

void BulkSender::OnRtoTimer() {
  timer_pending_ = false;
  if (!rto_deadline_) return;
  if (loop_.Now() < *rto_deadline_) {
    // The deadline moved while the timer was pending.
    timer_pending_ = true;
    loop_.Schedule(Event{*rto_deadline_, entity_, EventKind::kTimerExpiry, ++timer_generation_},
                   [this] { OnRtoTimer(); });
    return;
  }
  FireRto();
}

void BulkSender::FireRto() {
  ++rto_events_;
  cc_->OnRto(w_);
  CheckWindowFloor(w_);
  for (std::size_t i = 0; i < window_.size(); ++i) {
    SeqInfo& info = window_[i];
    if (info.state == SeqState::kOutstanding || info.state == SeqState::kRetransmitted) {
      info.state = SeqState::kLost;
      lost_pending_.insert(snd_una_ + i);
    }
  }
  retx_in_flight_.clear();
  pipe_ = 0;
  w_.in_flight = 0;
  in_recovery_ = false;
  w_.in_recovery = false;
  loss_scan_ = std::max(loss_scan_, snd_nxt_);
  rto_backoff_ = std::min<std::uint32_t>(rto_backoff_ * 2, 64);
  rto_deadline_.reset();
  ArmRto();
  TrySend();
}

std::uint64_t BulkSender::RecountPipe() const {
  return static_cast<std::uint64_t>(std::count_if(window_.begin(), window_.end(), [](const SeqInfo& i) {
    return i.state == SeqState::kOutstanding || i.state == SeqState::kRetransmitted;
  }));
}

Packet BulkReceiver::OnData(const Packet& data, SimTime now) {
  ++arrivals_;
  if (data.seq == next_expected_) {
    ++next_expected_;
    while (!out_of_order_.empty() && *out_of_order_.begin() == next_expected_) {
      out_of_order_.erase(out_of_order_.begin());
      ++next_expected_;
    }
  } else if (data.seq > next_expected_) {
    out_of_order_.insert(data.seq);
  }
  Packet ack;
  ack.flow_id = flow_;
  ack.seq = data.seq;
  ack.size_bytes = kAckPacketBytes;
  ack.sent_at = now;
  ack.first_sent_at = now;
  ack.is_ack = true;
  ack.cum_ack = next_expected_;
  ack.echo_sent_at = data.sent_at;
  return ack;
}

}  // namespace c2lab
