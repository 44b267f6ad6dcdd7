#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>

#include "c2lab/link/codel.h"
#include "c2lab/link/packet.h"
#include "c2lab/sim/rng.h"
#include "c2lab/sim/sim_time.h"

namespace c2lab {

enum class AqmKind { kDropTail, kCodel };

struct LinkConfig {
  std::optional<std::uint32_t> queue_cap;  // packets; nullopt = unlimited
  AqmKind aqm = AqmKind::kDropTail;
  CodelParams codel;
  SimTime one_way_prop_delay = Millis(20);
  double loss_prob = 0.0;
  std::uint32_t mtu_bytes = 1500;
};

/// Per-flow packet accounting at one bottleneck queue.
struct LinkCounters {
  std::uint64_t offered = 0;  // every packet handed to Enqueue
  std::uint64_t forwarded = 0;
  std::uint64_t aqm_drops = 0;
  std::uint64_t tail_drops = 0;
  std::uint64_t stochastic_losses = 0;
  std::uint64_t queued = 0;

  bool Conserved() const {
    return offered == forwarded + aqm_drops + tail_drops + stochastic_losses + queued;
  }
};

enum class EnqueueResult { kAccepted, kTailDropped };

/// One isolated FIFO at the cellular base station, drained at trace-given
/// delivery opportunities.
///
/// The owner drives time: it calls Enqueue() when packets arrive and
/// OnDeliveryOpportunity() at each trace opportunity. A forwarded packet is
/// due at the far end `one_way_prop_delay` later. Every discarded packet is
/// reported through the drop callback with its fate.
class BottleneckLink {
 public:
  using DropFn = std::function<void(const Packet&, Fate)>;

  BottleneckLink(LinkConfig config, std::uint64_t rng_seed, DropFn on_drop = nullptr);

  EnqueueResult Enqueue(Packet pkt, SimTime now);

  /// Serves at most one packet. Packets the AQM rejects are discarded and the
  /// next head is examined under the same opportunity. Returns the packet that
  /// left the queue and survived the stochastic loss draw, if any.
  std::optional<Packet> OnDeliveryOpportunity(SimTime now);

  std::size_t QueueLength() const { return queue_.size(); }
  const LinkConfig& config() const { return config_; }
  const CodelState& codel_state() const { return codel_; }

  /// Counters for one flow; all-zero if the flow never used this link.
  LinkCounters Counters(FlowId flow) const;
  const std::map<FlowId, LinkCounters>& AllCounters() const { return counters_; }

  /// Bytes forwarded (including stochastically lost ones) over the lifetime.
  std::uint64_t BytesServed() const { return bytes_served_; }
  std::uint64_t OpportunitiesSeen() const { return opportunities_; }

 private:
  void Discard(const Packet& pkt, Fate fate);

  LinkConfig config_;
  std::deque<Packet> queue_;
  std::uint64_t queued_bytes_ = 0;
  CodelState codel_;
  SeededRng rng_;
  DropFn on_drop_;
  std::map<FlowId, LinkCounters> counters_;
  std::uint64_t bytes_served_ = 0;
  std::uint64_t opportunities_ = 0;
};

}  // namespace c2lab
