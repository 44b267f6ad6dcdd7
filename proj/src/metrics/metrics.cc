#include "c2lab/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace c2lab {

SimTime PerPacketDelay(const PacketRecord& rec, SimTime data_path_prop) {
  if (rec.fate != Fate::kDelivered || !rec.delivered_at) {
    throw std::invalid_argument("per-packet delay of an undelivered packet");
  }
  return *rec.delivered_at - rec.sent_at - data_path_prop;
}

double Percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile of empty sample set");
  if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must be in (0, 100]");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

double ThroughputMbps(std::span<const PacketRecord> records, SimTime duration) {
  if (duration.count() <= 0) throw std::invalid_argument("throughput over non-positive duration");
  std::uint64_t bytes = 0;
  for (const auto& r : records) {
    if (r.fate == Fate::kDelivered) bytes += r.size_bytes;
  }
  return static_cast<double>(bytes) * 8.0 / static_cast<double>(duration.count());
}

double JainIndex(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::invalid_argument("jain index of empty set");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : throughputs) {
    if (x < 0.0) throw std::invalid_argument("jain index of negative throughput");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) throw std::invalid_argument("jain index of all-zero throughputs");
  return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

std::vector<SeriesPoint> TimeseriesThroughput(std::span<const PacketRecord> records,
                                              std::span<const FlowId> flows, SimTime bin,
                                              SimTime end) {
  if (bin.count() <= 0) throw std::invalid_argument("timeseries bin must be positive");
  const auto bins = static_cast<std::size_t>((end.count() + bin.count() - 1) / bin.count());
  std::map<FlowId, std::vector<std::uint64_t>> bytes;
  for (FlowId f : flows) bytes[f].assign(bins, 0);
  for (const auto& r : records) {
    if (r.fate != Fate::kDelivered) continue;
    auto it = bytes.find(r.flow_id);
    if (it == bytes.end()) continue;
    // Bin i covers (i*bin, (i+1)*bin], matching where trace opportunities land.
    const std::int64_t t = r.delivered_at->count();
    if (t <= 0) continue;
    const auto idx = static_cast<std::size_t>((t - 1) / bin.count());
    if (idx < bins) it->second[idx] += r.size_bytes;
  }
  std::vector<SeriesPoint> out;
  out.reserve(bins * flows.size());
  for (std::size_t i = 0; i < bins; ++i) {
    for (FlowId f : flows) {
      const double mbps =
          static_cast<double>(bytes[f][i]) * 8.0 / static_cast<double>(bin.count());
      out.push_back({bin * static_cast<std::int64_t>(i), f, mbps});
    }
  }
  return out;
}

FlowMetrics ComputeFlowMetrics(std::span<const PacketRecord> records, FlowId flow,
                               std::string algorithm, SimTime data_path_prop,
                               SimTime window_begin, SimTime window_end) {
  FlowMetrics m;
  m.flow_id = flow;
  m.algorithm = std::move(algorithm);
  std::vector<double> delays_ms;
  std::uint64_t bytes = 0;
  for (const auto& r : records) {
    if (r.flow_id != flow) continue;
    switch (r.fate) {
      case Fate::kAqmDrop: ++m.drops.aqm; break;
      case Fate::kTailDrop: ++m.drops.tail; break;
      case Fate::kStochasticLoss: ++m.drops.stochastic; break;
      case Fate::kDelivered:
        if (*r.delivered_at > window_begin && *r.delivered_at <= window_end) {
          ++m.delivered_count;
          bytes += r.size_bytes;
          delays_ms.push_back(ToMillis(PerPacketDelay(r, data_path_prop)));
        }
        break;
      case Fate::kInFlight: break;
    }
  }
  const SimTime span = window_end - window_begin;
  if (span.count() > 0) {
    m.avg_throughput_mbps = static_cast<double>(bytes) * 8.0 / static_cast<double>(span.count());
  }
  if (!delays_ms.empty()) {
    double sum = 0.0;
    for (double d : delays_ms) sum += d;
    m.avg_delay_ms = sum / static_cast<double>(delays_ms.size());
    m.p95_delay_ms = Percentile(std::move(delays_ms), 95.0);
  }
  return m;
}

}  // namespace c2lab
