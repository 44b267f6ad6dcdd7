#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "c2lab/sim/sim_time.h"

namespace c2lab {

using EntityId = std::uint32_t;

enum class EventKind : std::uint8_t {
  kPacketArrival = 0,
  kDeliveryOpportunity = 1,
  kTimerExpiry = 2,
  kFlowStart = 3,
};

struct Event {
  SimTime fire_at{0};
  EntityId target = 0;
  EventKind kind = EventKind::kTimerExpiry;
  std::uint64_t payload = 0;
};

/// Single-threaded discrete-event scheduler.
///
/// Events fire in nondecreasing `fire_at` order; events with equal timestamps
/// fire in the order they were scheduled. Every dispatched event is folded
/// into a running FNV-1a digest of (fire_at, target, kind, payload), which
/// serves as a compact event log for determinism checks.
class EventLoop {
 public:
  using Action = std::function<void()>;

  EventLoop() = default;
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  SimTime Now() const { return now_; }

  /// Throws std::logic_error if `event.fire_at` is earlier than Now().
  void Schedule(const Event& event, Action action);

  /// Dispatches every event with fire_at <= t_end, then sets the clock to
  /// t_end. Returns the number of events dispatched.
  std::uint64_t RunUntil(SimTime t_end);

  /// Called after every dispatched event; used by invariant checkers.
  void SetPostEventHook(std::function<void(const Event&)> hook) { post_hook_ = std::move(hook); }

  std::uint64_t Digest() const { return digest_; }
  std::uint64_t DispatchedCount() const { return dispatched_; }
  std::size_t PendingCount() const { return queue_.size(); }

 private:
  struct Entry {
    Event event;
    std::uint64_t order;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.event.fire_at != b.event.fire_at) return a.event.fire_at > b.event.fire_at;
      return a.order > b.order;
    }
  };

  void Fold(const Event& event);

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  SimTime now_{0};
  std::uint64_t next_order_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
  std::function<void(const Event&)> post_hook_;
};

}  // namespace c2lab
