#pragma once

#include <cstdint>
#include <optional>

#include "c2lab/sim/sim_time.h"

namespace c2lab {

struct CodelParams {
  SimTime target = Millis(5);
  SimTime interval = Millis(100);
};

struct CodelState {
  std::optional<SimTime> first_above_time;
  SimTime drop_next{0};
  std::uint32_t count = 0;
  std::uint32_t last_count = 0;
  bool dropping = false;
};

enum class CodelVerdict { kKeep, kDrop };

/// CoDel dequeue-time decision, after the control law of RFC 8289.
///
/// Call once per packet taken from the head, in dequeue order. `sojourn` is
/// now - enqueued_at. `backlog_above_mtu` is false when the queue (including
/// this packet) holds at most one MTU, in which case CoDel never drops.
CodelVerdict CodelDecide(CodelState& state, const CodelParams& params, SimTime sojourn,
                         SimTime now, bool backlog_above_mtu = true);

/// t + interval / sqrt(count), rounded to the nearest microsecond.
SimTime CodelControlLaw(SimTime t, SimTime interval, std::uint32_t count);

}  // namespace c2lab
