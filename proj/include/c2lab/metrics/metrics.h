#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "c2lab/link/packet.h"
#include "c2lab/sim/sim_time.h"

namespace c2lab {

/// One transmission of a data packet and what became of it. `sent_at` is the
/// first transmission time of the sequence number, so a retransmission's
/// delay counts from the original send.
struct PacketRecord {
  FlowId flow_id = 0;
  std::uint64_t seq = 0;
  std::uint32_t size_bytes = 0;
  SimTime sent_at{0};
  std::optional<SimTime> delivered_at;
  Fate fate = Fate::kInFlight;
};

struct DropCounts {
  std::uint64_t aqm = 0;
  std::uint64_t tail = 0;
  std::uint64_t stochastic = 0;
};

struct FlowMetrics {
  FlowId flow_id = 0;
  std::string algorithm;
  double avg_throughput_mbps = 0.0;
  double avg_delay_ms = 0.0;
  double p95_delay_ms = 0.0;
  std::uint64_t delivered_count = 0;
  DropCounts drops;
};

/// Delivery time minus send time minus the one-way propagation delay of the
/// data path. Throws std::invalid_argument for an undelivered record.
SimTime PerPacketDelay(const PacketRecord& rec, SimTime data_path_prop);

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample.
/// Throws for empty input or p outside (0, 100].
double Percentile(std::vector<double> samples, double p);

/// Total delivered bits over `duration`, in Mbit/s. Undelivered records are
/// ignored. Throws for non-positive duration.
double ThroughputMbps(std::span<const PacketRecord> records, SimTime duration);

/// (sum x)^2 / (n * sum x^2). Throws for empty or all-zero input.
double JainIndex(std::span<const double> throughputs);

struct SeriesPoint {
  SimTime t{0};  // bin start
  FlowId flow_id = 0;
  double mbps = 0.0;
};

/// Per-flow delivered throughput in consecutive bins of width `bin` covering
/// (0, end]; bin i covers (i*bin, (i+1)*bin]. Every flow in `flows` gets a
/// point in every bin.
std::vector<SeriesPoint> TimeseriesThroughput(std::span<const PacketRecord> records,
                                              std::span<const FlowId> flows, SimTime bin,
                                              SimTime end);

/// Metrics for one flow over deliveries in (window_begin, window_end].
/// Drop counts cover the whole run, matching the link counters.
FlowMetrics ComputeFlowMetrics(std::span<const PacketRecord> records, FlowId flow,
                               std::string algorithm, SimTime data_path_prop,
                               SimTime window_begin, SimTime window_end);

}  // namespace c2lab
