#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <set>

#include "c2lab/cc/congestion_controller.h"
#include "c2lab/link/packet.h"
#include "c2lab/sim/event_loop.h"

namespace c2lab {

inline constexpr std::uint32_t kDataPacketBytes = 1500;
inline constexpr std::uint32_t kAckPacketBytes = 40;
inline constexpr SimTime kMinRto = Millis(200);
inline constexpr SimTime kInitialRto = Seconds(1);
inline constexpr SimTime kMaxRto = Seconds(60);
inline constexpr std::uint64_t kDupThresh = 3;

/// Always-backlogged sender with exact per-packet acknowledgment knowledge.
///
/// A packet is declared lost once a packet sent at least kDupThresh sequence
/// numbers after it has been acked; a retransmission is lost once any later
/// transmission has been acked. Losses open a recovery episode that ends
/// when everything outstanding at its start is acked. Only the first loss of
/// an episode reaches the controller. The retransmission timer follows
/// srtt + 4 * rttvar with a 200 ms floor, restarts when the cumulative ack
/// advances, and doubles on each expiry.
class BulkSender {
 public:
  using TransmitFn = std::function<void(Packet&)>;

  BulkSender(FlowId flow, EntityId entity, std::unique_ptr<CongestionController> cc,
             EventLoop& loop, TransmitFn transmit);

  void Start();
  void OnAck(const Packet& ack);

  FlowId flow_id() const { return flow_; }
  const CwndState& window() const { return w_; }
  const CongestionController& controller() const { return *cc_; }
  CongestionController& controller() { return *cc_; }

  std::uint64_t transmissions() const { return transmissions_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint64_t loss_events() const { return loss_events_; }
  std::uint64_t rto_events() const { return rto_events_; }
  std::uint64_t acked_packets() const { return acked_packets_; }
  std::uint64_t pipe() const { return pipe_; }
  SimTime rto() const { return rto_; }

  /// Recount of packets believed in the network; equals pipe() when the
  /// bookkeeping is consistent.
  std::uint64_t RecountPipe() const;

 private:
  enum class SeqState : std::uint8_t { kOutstanding, kLost, kRetransmitted, kAcked };
  struct SeqInfo {
    SeqState state;
    SimTime first_sent;
    SimTime last_sent;
  };

  void TrySend();
  void SendSeq(std::uint64_t seq, bool retransmit);
  void UpdateRtt(SimTime rtt);
  bool DetectLosses(SimTime acked_sent_at);
  void ArmRto();
  void OnRtoTimer();
  void FireRto();

  FlowId flow_;
  EntityId entity_;
  std::unique_ptr<CongestionController> cc_;
  EventLoop& loop_;
  TransmitFn transmit_;

  CwndState w_;
  bool started_ = false;
  std::uint64_t snd_una_ = 0;
  std::uint64_t snd_nxt_ = 0;
  std::deque<SeqInfo> window_;  // window_[i] describes seq snd_una_ + i
  std::set<std::uint64_t> lost_pending_;
  std::set<std::uint64_t> retx_in_flight_;
  std::uint64_t pipe_ = 0;
  std::uint64_t highest_acked_ = 0;
  bool any_acked_ = false;
  std::uint64_t loss_scan_ = 0;
  bool in_recovery_ = false;
  std::uint64_t recovery_point_ = 0;

  bool have_rtt_ = false;
  SimTime rto_ = kInitialRto;
  std::uint32_t rto_backoff_ = 1;
  std::optional<SimTime> rto_deadline_;
  bool timer_pending_ = false;
  std::uint64_t timer_generation_ = 0;

  std::uint64_t transmissions_ = 0;
  std::uint64_t retransmissions_ = 0;
  std::uint64_t loss_events_ = 0;
  std::uint64_t rto_events_ = 0;
  std::uint64_t acked_packets_ = 0;
};

/// Acks every arriving data packet immediately, echoing its send time.
class BulkReceiver {
 public:
  explicit BulkReceiver(FlowId flow) : flow_(flow) {}

  /// Returns the ack for `data`.
  Packet OnData(const Packet& data, SimTime now);

  std::uint64_t next_expected() const { return next_expected_; }
  std::uint64_t arrivals() const { return arrivals_; }

 private:
  FlowId flow_;
  std::uint64_t next_expected_ = 0;
  std::set<std::uint64_t> out_of_order_;
  std::uint64_t arrivals_ = 0;
};

}  // namespace c2lab
