#include "c2lab/link/bottleneck_link.h"

#include <stdexcept>

namespace c2lab {

BottleneckLink::BottleneckLink(LinkConfig config, std::uint64_t rng_seed, DropFn on_drop)
    : config_(config), rng_(rng_seed), on_drop_(std::move(on_drop)) {
  if (!(config_.loss_prob >= 0.0 && config_.loss_prob <= 1.0)) {
    throw std::invalid_argument("loss probability outside [0,1]");
  }
}

EnqueueResult BottleneckLink::Enqueue(Packet pkt, SimTime now) {
  if (pkt.size_bytes == 0 || pkt.size_bytes > config_.mtu_bytes) {
    throw std::invalid_argument("packet size must be in (0, mtu]");
  }
  auto& c = counters_[pkt.flow_id];
  ++c.offered;
  pkt.enqueued_at = now;
  if (config_.queue_cap && queue_.size() >= *config_.queue_cap) {
    Discard(pkt, Fate::kTailDrop);
    return EnqueueResult::kTailDropped;
  }
  ++c.queued;
  queued_bytes_ += pkt.size_bytes;
  queue_.push_back(pkt);
  return EnqueueResult::kAccepted;
}

std::optional<Packet> BottleneckLink::OnDeliveryOpportunity(SimTime now) {
  ++opportunities_;
  while (!queue_.empty()) {
    Packet head = queue_.front();
    queue_.pop_front();
    --counters_[head.flow_id].queued;
    const bool backlog_above_mtu = queued_bytes_ > config_.mtu_bytes;
    queued_bytes_ -= head.size_bytes;

    if (config_.aqm == AqmKind::kCodel &&
        CodelDecide(codel_, config_.codel, now - head.enqueued_at, now, backlog_above_mtu) ==
            CodelVerdict::kDrop) {
      Discard(head, Fate::kAqmDrop);
      continue;
    }

    // The opportunity is spent once a packet leaves the queue.
    bytes_served_ += head.size_bytes;
    if (config_.loss_prob > 0.0 && Bernoulli(config_.loss_prob, rng_)) {
      Discard(head, Fate::kStochasticLoss);
      return std::nullopt;
    }
    ++counters_[head.flow_id].forwarded;
    return head;
  }
  return std::nullopt;
}

LinkCounters BottleneckLink::Counters(FlowId flow) const {
  auto it = counters_.find(flow);
  return it == counters_.end() ? LinkCounters{} : it->second;
}

void BottleneckLink::Discard(const Packet& pkt, Fate fate) {
  auto& c = counters_[pkt.flow_id];
  switch (fate) {
    case Fate::kAqmDrop: ++c.aqm_drops; break;
    case Fate::kTailDrop: ++c.tail_drops; break;
    case Fate::kStochasticLoss: ++c.stochastic_losses; break;
    default: throw std::logic_error("invalid drop fate");
  }
  if (on_drop_) on_drop_(pkt, fate);
}

}  // namespace c2lab
