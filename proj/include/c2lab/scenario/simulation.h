#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2lab/link/bottleneck_link.h"
#include "c2lab/metrics/metrics.h"
#include "c2lab/scenario/bulk_flow.h"
#include "c2lab/scenario/config.h"
#include "c2lab/sim/event_loop.h"
#include "c2lab/traces/link_trace.h"

namespace c2lab {

/// Builds the controller named by `flow.algorithm`. Throws ConfigError for an
/// unknown name.
std::unique_ptr<CongestionController> MakeController(const FlowSpec& flow);

struct AggregateMetrics {
  double throughput_mbps = 0.0;
  double avg_delay_ms = 0.0;
  double p95_delay_ms = 0.0;
};

struct RunReport {
  std::vector<FlowMetrics> flows;
  AggregateMetrics aggregate;
  std::vector<SeriesPoint> timeseries;
  std::uint64_t event_digest = 0;
  std::uint64_t events_dispatched = 0;
  std::string config_echo;
  std::string base_dir;
  // Set for sweep members.
  std::optional<std::string> sweep_key;
  std::optional<std::string> sweep_value;
};

/// One self-contained simulated world: a bottleneck queue per destination
/// id, each replaying the scenario trace; one sender/receiver pair per flow.
/// Acks return over a fixed-delay pipe, or over a trace-driven uplink queue.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, LinkTrace trace);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the configured duration and assembles the report.
  RunReport Run();

  EventLoop& loop() { return loop_; }
  const std::vector<PacketRecord>& records() const { return records_; }
  const BulkSender& sender(std::size_t flow) const { return *flows_.at(flow).sender; }
  BulkSender& sender(std::size_t flow) { return *flows_.at(flow).sender; }
  const BottleneckLink& downlink(std::uint32_t queue) const { return *queues_.at(queue).down; }
  std::size_t flow_count() const { return flows_.size(); }
  const LinkTrace& trace() const { return trace_; }

  /// Packet conservation for every flow: transmissions equal arrivals plus
  /// drops of every kind plus packets queued or propagating. On failure,
  /// describes the violation in `why`.
  bool CheckConservation(std::string* why = nullptr) const;

 private:
  struct QueueRuntime {
    EntityId down_entity = 0;
    EntityId up_entity = 0;
    std::unique_ptr<BottleneckLink> down;
    std::unique_ptr<BottleneckLink> up;
    std::unique_ptr<OpportunityCursor> down_cursor;
    std::unique_ptr<OpportunityCursor> up_cursor;
  };
  struct FlowRuntime {
    FlowSpec spec;
    EntityId sender_entity = 0;
    EntityId receiver_entity = 0;
    std::unique_ptr<BulkSender> sender;
    std::unique_ptr<BulkReceiver> receiver;
    std::uint64_t propagating = 0;  // data packets between bottleneck and receiver
    std::uint64_t arrived = 0;
  };

  void Transmit(std::size_t flow, Packet& pkt);
  void ScheduleDownOpportunity(std::uint32_t queue);
  void ScheduleUpOpportunity(std::uint32_t queue);
  void DeliverData(std::size_t flow, const Packet& pkt);
  void SendAck(std::size_t flow, const Packet& ack);
  void OnDrop(const Packet& pkt, Fate fate);

  ScenarioConfig cfg_;
  LinkTrace trace_;
  EventLoop loop_;
  std::map<std::uint32_t, QueueRuntime> queues_;
  std::vector<FlowRuntime> flows_;
  std::vector<PacketRecord> records_;
  EntityId next_entity_ = 0;
};

/// Loads the trace, runs one simulation, returns its report. Trace files that
/// cannot be read raise std::runtime_error.
RunReport RunScenario(const ScenarioConfig& cfg);

/// Sweepable keys: c2tcp.target_ms, c2tcp.interval_ms, loss_prob.
bool IsSweepKey(const std::string& key);

/// One run per value with the base seed; runs may execute concurrently.
/// Throws ConfigError for an unknown key or an empty value list.
std::vector<RunReport> Sweep(const ScenarioConfig& base, const std::string& key,
                             const std::vector<std::string>& values, unsigned max_parallel = 0);

}  // namespace c2lab
