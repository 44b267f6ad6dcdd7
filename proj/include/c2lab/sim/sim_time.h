#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace c2lab {

/// Virtual time: integer microseconds since simulation start.
using SimTime = std::chrono::microseconds;

constexpr SimTime Micros(std::int64_t us) { return SimTime(us); }
constexpr SimTime Millis(std::int64_t ms) { return SimTime(ms * 1000); }
constexpr SimTime Seconds(std::int64_t s) { return SimTime(s * 1000000); }

/// Rounds a fractional millisecond value to the nearest microsecond.
inline SimTime MillisF(double ms) { return SimTime(std::llround(ms * 1000.0)); }
inline SimTime SecondsF(double s) { return SimTime(std::llround(s * 1e6)); }

inline double ToMillis(SimTime t) { return static_cast<double>(t.count()) / 1000.0; }
inline double ToSeconds(SimTime t) { return static_cast<double>(t.count()) / 1e6; }

}  // namespace c2lab
