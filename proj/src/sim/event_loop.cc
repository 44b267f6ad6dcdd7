#include "c2lab/sim/event_loop.h"

#include <stdexcept>
#include <string>

namespace c2lab {

void EventLoop::Schedule(const Event& event, Action action) {
  if (event.fire_at < now_) {
    throw std::logic_error("event scheduled in the past: fire_at=" +
                           std::to_string(event.fire_at.count()) +
                           "us now=" + std::to_string(now_.count()) + "us");
  }
  queue_.push(Entry{event, next_order_++, std::move(action)});
}

std::uint64_t EventLoop::RunUntil(SimTime t_end) {
  if (t_end < now_) {
    throw std::logic_error("RunUntil target precedes current time");
  }
  std::uint64_t count = 0;
  while (!queue_.empty() && queue_.top().event.fire_at <= t_end) {
    // priority_queue::top is const; the entry is discarded right after.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    now_ = entry.event.fire_at;
    Fold(entry.event);
    ++dispatched_;
    ++count;
    if (entry.action) entry.action();
    if (post_hook_) post_hook_(entry.event);
  }
  now_ = t_end;
  return count;
}

void EventLoop::Fold(const Event& event) {
  auto mix = [this](std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      digest_ ^= (value >> (8 * i)) & 0xffU;
      digest_ *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(event.fire_at.count()));
  mix(event.target);
  mix(static_cast<std::uint64_t>(event.kind));
  mix(event.payload);
}

}  // namespace c2lab
