#include "c2lab/traces/link_trace.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "c2lab/sim/rng.h"

namespace c2lab {

LinkTrace::LinkTrace(std::vector<std::uint32_t> opportunities_ms, std::uint32_t period_ms,
                     std::uint32_t mtu_bytes)
    : opportunities_(std::move(opportunities_ms)), period_ms_(period_ms), mtu_bytes_(mtu_bytes) {
  if (opportunities_.empty()) throw std::invalid_argument("trace has no opportunities");
  if (period_ms_ == 0) throw std::invalid_argument("trace period must be at least 1 ms");
  if (mtu_bytes_ == 0) throw std::invalid_argument("mtu must be positive");
  if (!std::is_sorted(opportunities_.begin(), opportunities_.end())) {
    throw std::invalid_argument("trace offsets must be nondecreasing");
  }
  if (opportunities_.back() > period_ms_) {
    throw std::invalid_argument("trace offset beyond period");
  }
}

double LinkTrace::MeanRateMbps() const {
  const double bits = static_cast<double>(opportunities_.size()) * mtu_bytes_ * 8.0;
  return bits / (static_cast<double>(period_ms_) * 1000.0);
}

std::uint64_t LinkTrace::OpportunitiesIn(std::uint64_t begin_ms, std::uint64_t end_ms) const {
  if (end_ms <= begin_ms) return 0;
  // Count of absolute times t + k*period < x, for k >= 0.
  auto below = [this](std::uint64_t x) {
    std::uint64_t n = 0;
    for (std::uint32_t t : opportunities_) {
      if (t < x) n += (x - t - 1) / period_ms_ + 1;
    }
    return n;
  };
  return below(end_ms) - below(begin_ms);
}

std::string LinkTrace::Serialize() const {
  std::string out;
  out.reserve(opportunities_.size() * 6);
  for (std::uint32_t t : opportunities_) {
    out += std::to_string(t);
    out += '\n';
  }
  return out;
}

std::uint64_t OpportunityCursor::NextMs() {
  const auto& ops = trace_->opportunities();
  const std::uint64_t t = cycle_base_ms_ + ops[index_];
  if (++index_ == ops.size()) {
    index_ = 0;
    cycle_base_ms_ += trace_->period_ms();
  }
  return t;
}

LinkTrace ParseTrace(std::string_view text, std::uint32_t mtu_bytes) {
  std::vector<std::uint32_t> offsets;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    const bool last = end == std::string_view::npos;
    std::string_view line = text.substr(pos, last ? std::string_view::npos : end - pos);
    pos = last ? text.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      // Only a single trailing newline is tolerated, which never reaches here.
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": empty line");
    }
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": not a non-negative integer: '" + std::string(line) + "'");
    }
    if (!offsets.empty() && value < offsets.back()) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": decreasing timestamp");
    }
    offsets.push_back(value);
  }
  if (offsets.empty()) throw std::invalid_argument("trace is empty");
  if (offsets.back() == 0) throw std::invalid_argument("trace ends at timestamp 0");
  const std::uint32_t period = offsets.back();
  return LinkTrace(std::move(offsets), period, mtu_bytes);
}

LinkTrace LoadTraceFile(const std::string& path, std::uint32_t mtu_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseTrace(buf.str(), mtu_bytes);
}

namespace {

std::uint64_t OpportunityCount(double rate_mbps, std::uint32_t duration_ms, std::uint32_t mtu) {
  const double per_ms = rate_mbps * 1000.0 / (mtu * 8.0);
  return static_cast<std::uint64_t>(std::llround(per_ms * duration_ms));
}

// Appends `count` evenly spaced offsets in (base, base + duration].
void PlaceEvenly(std::vector<std::uint32_t>& out, std::uint64_t count, std::uint32_t base,
                 std::uint32_t duration_ms) {
  for (std::uint64_t i = 1; i <= count; ++i) {
    // ceil(i * duration / count) in integers.
    const std::uint64_t offset = (i * duration_ms + count - 1) / count;
    out.push_back(base + static_cast<std::uint32_t>(offset));
  }
}

}  // namespace

LinkTrace GenConstantTrace(double rate_mbps, std::uint32_t duration_ms, std::uint32_t mtu_bytes) {
  if (!(rate_mbps > 0.0)) throw std::invalid_argument("trace rate must be positive");
  if (duration_ms == 0) throw std::invalid_argument("trace duration must be positive");
  const std::uint64_t count = OpportunityCount(rate_mbps, duration_ms, mtu_bytes);
  if (count == 0) {
    throw std::invalid_argument("rate too low for a single opportunity in the trace duration");
  }
  std::vector<std::uint32_t> offsets;
  offsets.reserve(count);
  PlaceEvenly(offsets, count, 0, duration_ms);
  return LinkTrace(std::move(offsets), duration_ms, mtu_bytes);
}

LinkTrace GenStepTrace(const std::vector<TraceStep>& steps, std::uint32_t mtu_bytes) {
  if (steps.empty()) throw std::invalid_argument("step trace needs at least one step");
  std::vector<std::uint32_t> offsets;
  std::uint32_t base = 0;
  std::uint64_t last_count = 0;
  for (const auto& step : steps) {
    if (step.duration_ms == 0) throw std::invalid_argument("step duration must be positive");
    if (step.rate_mbps < 0.0 || !std::isfinite(step.rate_mbps)) {
      throw std::invalid_argument("step rate must be non-negative");
    }
    last_count = OpportunityCount(step.rate_mbps, step.duration_ms, mtu_bytes);
    PlaceEvenly(offsets, last_count, base, step.duration_ms);
    base += step.duration_ms;
  }
  if (last_count == 0) {
    throw std::invalid_argument("final step must carry at least one opportunity");
  }
  return LinkTrace(std::move(offsets), base, mtu_bytes);
}

LinkTrace GenRandomWalkTrace(std::uint64_t seed, double start_mbps, double min_mbps,
                             double max_mbps, std::uint32_t step_ms, std::uint32_t duration_ms,
                             std::uint32_t mtu_bytes) {
  if (!(min_mbps > 0.0) || min_mbps > max_mbps || start_mbps < min_mbps || start_mbps > max_mbps) {
    throw std::invalid_argument("random walk bounds must satisfy 0 < min <= start <= max");
  }
  if (step_ms == 0 || duration_ms < step_ms) {
    throw std::invalid_argument("random walk step must be positive and fit the duration");
  }
  SeededRng rng(seed);
  std::vector<TraceStep> steps;
  double rate = start_mbps;
  for (std::uint32_t t = 0; t < duration_ms; t += step_ms) {
    steps.push_back({rate, std::min(step_ms, duration_ms - t)});
    // Log-uniform factor in [1/1.5, 1.5].
    const double factor = std::exp((rng.NextUnit() * 2.0 - 1.0) * std::log(1.5));
    rate = std::clamp(rate * factor, min_mbps, max_mbps);
  }
  return GenStepTrace(steps, mtu_bytes);
}

}  // namespace c2lab
