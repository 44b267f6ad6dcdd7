#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace c2lab {

/// A periodic schedule of link delivery opportunities in Mahimahi form.
///
/// Each entry is the millisecond offset of one opportunity to deliver up to
/// `mtu_bytes`. The schedule repeats every `period_ms`: entry t fires at
/// t, t + period, t + 2*period, ... Offsets lie in [0, period_ms].
class LinkTrace {
 public:
  static constexpr std::uint32_t kDefaultMtu = 1500;

  LinkTrace(std::vector<std::uint32_t> opportunities_ms, std::uint32_t period_ms,
            std::uint32_t mtu_bytes = kDefaultMtu);

  const std::vector<std::uint32_t>& opportunities() const { return opportunities_; }
  std::uint32_t period_ms() const { return period_ms_; }
  std::uint32_t mtu_bytes() const { return mtu_bytes_; }

  /// Long-run capacity in Mbit/s.
  double MeanRateMbps() const;

  /// Number of opportunities with absolute time in [begin_ms, end_ms).
  std::uint64_t OpportunitiesIn(std::uint64_t begin_ms, std::uint64_t end_ms) const;

  /// Mahimahi text: one offset per line, LF endings, trailing newline.
  std::string Serialize() const;

 private:
  std::vector<std::uint32_t> opportunities_;
  std::uint32_t period_ms_;
  std::uint32_t mtu_bytes_;
};

/// Parses Mahimahi trace text. Accepts LF or CRLF and an optional trailing
/// newline. Throws std::invalid_argument on a non-integer line, decreasing
/// offsets, an empty file, or a final offset of 0.
LinkTrace ParseTrace(std::string_view text, std::uint32_t mtu_bytes = LinkTrace::kDefaultMtu);

LinkTrace LoadTraceFile(const std::string& path, std::uint32_t mtu_bytes = LinkTrace::kDefaultMtu);

/// Evenly spaced opportunities over `duration_ms` whose count is the nearest
/// integer to rate * duration / (mtu * 8). Throws on non-positive rate or a
/// rate too low to place a single opportunity in the duration.
LinkTrace GenConstantTrace(double rate_mbps, std::uint32_t duration_ms,
                           std::uint32_t mtu_bytes = LinkTrace::kDefaultMtu);

/// Walks a trace's opportunities in absolute time, looping every period.
class OpportunityCursor {
 public:
  explicit OpportunityCursor(const LinkTrace& trace) : trace_(&trace) {}

  /// Absolute time of the next opportunity, in milliseconds.
  std::uint64_t NextMs();

 private:
  const LinkTrace* trace_;
  std::size_t index_ = 0;
  std::uint64_t cycle_base_ms_ = 0;
};

struct TraceStep {
  double rate_mbps;
  std::uint32_t duration_ms;
};

/// Concatenation of constant-rate segments; period = total duration.
/// Segments may have zero rate (outage) but the final segment must carry
/// at least one opportunity so that its last offset equals the period.
LinkTrace GenStepTrace(const std::vector<TraceStep>& steps,
                       std::uint32_t mtu_bytes = LinkTrace::kDefaultMtu);

/// Piecewise-constant trace whose rate follows a bounded multiplicative
/// random walk, re-drawn every `step_ms`.
LinkTrace GenRandomWalkTrace(std::uint64_t seed, double start_mbps, double min_mbps,
                             double max_mbps, std::uint32_t step_ms, std::uint32_t duration_ms,
                             std::uint32_t mtu_bytes = LinkTrace::kDefaultMtu);

}  // namespace c2lab
