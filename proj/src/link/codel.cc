#include "c2lab/link/codel.h"

#include <cmath>

namespace c2lab {

SimTime CodelControlLaw(SimTime t, SimTime interval, std::uint32_t count) {
  const double spacing = static_cast<double>(interval.count()) / std::sqrt(static_cast<double>(count));
  return t + SimTime(std::llround(spacing));
}

namespace {

// The "dodequeue" half: tracks how long sojourn has stayed above target.
bool OkToDrop(CodelState& s, const CodelParams& p, SimTime sojourn, SimTime now,
              bool backlog_above_mtu) {
  if (sojourn < p.target || !backlog_above_mtu) {
    s.first_above_time.reset();
    return false;
  }
  if (!s.first_above_time) {
    s.first_above_time = now + p.interval;
    return false;
  }
  return now >= *s.first_above_time;
}

}  // namespace

CodelVerdict CodelDecide(CodelState& s, const CodelParams& p, SimTime sojourn, SimTime now,
                         bool backlog_above_mtu) {
  const bool ok_to_drop = OkToDrop(s, p, sojourn, now, backlog_above_mtu);
  if (s.dropping) {
    if (!ok_to_drop) {
      s.dropping = false;
      return CodelVerdict::kKeep;
    }
    if (now >= s.drop_next) {
      ++s.count;
      s.drop_next = CodelControlLaw(s.drop_next, p.interval, s.count);
      return CodelVerdict::kDrop;
    }
    return CodelVerdict::kKeep;
  }
  if (ok_to_drop) {
    s.dropping = true;
    // Re-entering soon after the last dropping episode resumes near the
    // previous drop rate.
    const std::uint32_t delta = s.count - s.last_count;
    s.count = 1;
    if (delta > 1 && now - s.drop_next < 16 * p.interval) s.count = delta;
    s.drop_next = CodelControlLaw(now, p.interval, s.count);
    s.last_count = s.count;
    return CodelVerdict::kDrop;
  }
  return CodelVerdict::kKeep;
}

}  // namespace c2lab
