#pragma once

#include <cstdint>

#include "c2lab/sim/sim_time.h"

namespace c2lab {

using FlowId = std::uint32_t;

struct Packet {
  FlowId flow_id = 0;
  std::uint64_t seq = 0;
  std::uint32_t size_bytes = 0;
  SimTime sent_at{0};      // this transmission left the sender
  SimTime enqueued_at{0};  // entered the bottleneck queue
  SimTime first_sent_at{0};  // first transmission of this sequence number
  std::uint64_t record_index = 0;  // index into the run's PacketRecord log

  // Ack fields. `is_ack` packets travel the reverse path.
  bool is_ack = false;
  std::uint64_t cum_ack = 0;  // next sequence number the receiver expects
  SimTime echo_sent_at{0};    // sent_at of the data transmission being acked
};

enum class Fate : std::uint8_t {
  kInFlight = 0,
  kDelivered,
  kAqmDrop,
  kTailDrop,
  kStochasticLoss,
};

}  // namespace c2lab
