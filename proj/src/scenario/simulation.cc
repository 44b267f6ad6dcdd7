#include "c2lab/scenario/simulation.h"

#include <algorithm>
#include <future>
#include <thread>

#include "c2lab/c2tcp/c2tcp.h"
#include "c2lab/cc/cubic.h"
#include "c2lab/cc/newreno.h"
#include "c2lab/cc/vegas.h"
#include "c2lab/sim/rng.h"

namespace c2lab {

namespace {

std::unique_ptr<CongestionController> MakeBase(const std::string& name) {
  if (name == "newreno") return std::make_unique<NewReno>();
  if (name == "cubic") return std::make_unique<Cubic>();
  if (name == "vegas") return std::make_unique<Vegas>();
  throw ConfigError("unknown congestion controller '" + name + "'");
}

}  // namespace

std::unique_ptr<CongestionController> MakeController(const FlowSpec& flow) {
  if (flow.algorithm.rfind("c2tcp+", 0) == 0) {
    const std::string base = flow.algorithm.substr(6);
    if (base != "newreno" && base != "cubic") {
      throw ConfigError("c2tcp base must be loss-based (newreno or cubic), got '" + base + "'");
    }
    C2tcpConfig cfg = flow.c2tcp;
    cfg.base_algorithm = base;
    return std::make_unique<C2tcp>(MakeBase(base), cfg);
  }
  return MakeBase(flow.algorithm);
}

Simulation::Simulation(const ScenarioConfig& cfg, LinkTrace trace)
    : cfg_(cfg), trace_(std::move(trace)) {
  std::optional<std::uint32_t> cap = cfg_.QueueCap();
  if (cfg_.queue_cap_mode == QueueCapMode::kBdp && !cfg_.queue_cap_resolved) {
    cap = BdpPackets(trace_.MeanRateMbps(), 2 * cfg_.OneWayProp(), trace_.mtu_bytes());
  }
  auto on_drop = [this](const Packet& p, Fate f) { OnDrop(p, f); };

  for (const auto& flow : cfg_.flows) {
    if (queues_.count(flow.queue)) continue;
    QueueRuntime q;
    LinkConfig down;
    down.queue_cap = cap;
    down.aqm = cfg_.AqmFor(flow.queue);
    down.codel = cfg_.codel;
    down.one_way_prop_delay = cfg_.OneWayProp();
    down.loss_prob = cfg_.loss_prob;
    down.mtu_bytes = trace_.mtu_bytes();
    q.down_entity = next_entity_++;
    q.down = std::make_unique<BottleneckLink>(down, DeriveSeed(cfg_.seed, 2 * flow.queue), on_drop);
    q.down_cursor = std::make_unique<OpportunityCursor>(trace_);
    if (cfg_.uplink == UplinkMode::kTrace) {
      LinkConfig up;
      up.one_way_prop_delay = cfg_.OneWayProp();
      up.mtu_bytes = trace_.mtu_bytes();
      q.up_entity = next_entity_++;
      q.up = std::make_unique<BottleneckLink>(up, DeriveSeed(cfg_.seed, 2 * flow.queue + 1), on_drop);
      q.up_cursor = std::make_unique<OpportunityCursor>(trace_);
    }
    queues_.emplace(flow.queue, std::move(q));
  }

  flows_.reserve(cfg_.flows.size());
  for (std::size_t i = 0; i < cfg_.flows.size(); ++i) {
    FlowRuntime fr;
    fr.spec = cfg_.flows[i];
    fr.sender_entity = next_entity_++;
    fr.receiver_entity = next_entity_++;
    fr.sender = std::make_unique<BulkSender>(static_cast<FlowId>(i), fr.sender_entity,
                                             MakeController(fr.spec), loop_,
                                             [this, i](Packet& p) { Transmit(i, p); });
    fr.receiver = std::make_unique<BulkReceiver>(static_cast<FlowId>(i));
    flows_.push_back(std::move(fr));
  }
}

void Simulation::Transmit(std::size_t flow, Packet& pkt) {
  pkt.record_index = records_.size();
  records_.push_back(
      PacketRecord{pkt.flow_id, pkt.seq, pkt.size_bytes, pkt.first_sent_at, std::nullopt,
                   Fate::kInFlight});
  queues_.at(flows_[flow].spec.queue).down->Enqueue(pkt, loop_.Now());
}

void Simulation::OnDrop(const Packet& pkt, Fate fate) {
  if (pkt.is_ack) return;
  records_[pkt.record_index].fate = fate;
}

void Simulation::ScheduleDownOpportunity(std::uint32_t queue) {
  QueueRuntime& q = queues_.at(queue);
  const SimTime at = Millis(static_cast<std::int64_t>(q.down_cursor->NextMs()));
  if (at > cfg_.Duration()) return;
  loop_.Schedule(Event{at, q.down_entity, EventKind::kDeliveryOpportunity, 0}, [this, queue] {
    QueueRuntime& qr = queues_.at(queue);
    if (auto pkt = qr.down->OnDeliveryOpportunity(loop_.Now())) {
      FlowRuntime& fr = flows_[pkt->flow_id];
      ++fr.propagating;
      loop_.Schedule(Event{loop_.Now() + cfg_.OneWayProp(), fr.receiver_entity,
                           EventKind::kPacketArrival, pkt->seq},
                     [this, p = *pkt] { DeliverData(p.flow_id, p); });
    }
    ScheduleDownOpportunity(queue);
  });
}

void Simulation::ScheduleUpOpportunity(std::uint32_t queue) {
  QueueRuntime& q = queues_.at(queue);
  const SimTime at = Millis(static_cast<std::int64_t>(q.up_cursor->NextMs()));
  if (at > cfg_.Duration()) return;
  loop_.Schedule(Event{at, q.up_entity, EventKind::kDeliveryOpportunity, 1}, [this, queue] {
    QueueRuntime& qr = queues_.at(queue);
    if (auto ack = qr.up->OnDeliveryOpportunity(loop_.Now())) {
      FlowRuntime& fr = flows_[ack->flow_id];
      loop_.Schedule(Event{loop_.Now() + cfg_.OneWayProp(), fr.sender_entity,
                           EventKind::kPacketArrival, ack->seq},
                     [this, a = *ack] { flows_[a.flow_id].sender->OnAck(a); });
    }
    ScheduleUpOpportunity(queue);
  });
}

void Simulation::DeliverData(std::size_t flow, const Packet& pkt) {
  FlowRuntime& fr = flows_[flow];
  --fr.propagating;
  ++fr.arrived;
  PacketRecord& rec = records_[pkt.record_index];
  rec.fate = Fate::kDelivered;
  rec.delivered_at = loop_.Now();
  SendAck(flow, fr.receiver->OnData(pkt, loop_.Now()));
}

void Simulation::SendAck(std::size_t flow, const Packet& ack) {
  FlowRuntime& fr = flows_[flow];
  QueueRuntime& q = queues_.at(fr.spec.queue);
  if (q.up) {
    q.up->Enqueue(ack, loop_.Now());
    return;
  }
  loop_.Schedule(
      Event{loop_.Now() + cfg_.OneWayProp(), fr.sender_entity, EventKind::kPacketArrival, ack.seq},
      [this, ack] { flows_[ack.flow_id].sender->OnAck(ack); });
}

bool Simulation::CheckConservation(std::string* why) const {
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const FlowRuntime& fr = flows_[i];
    const LinkCounters c = queues_.at(fr.spec.queue).down->Counters(static_cast<FlowId>(i));
    const std::uint64_t sent = fr.sender->transmissions();
    const std::uint64_t accounted = fr.arrived + fr.propagating + c.aqm_drops + c.tail_drops +
                                    c.stochastic_losses + c.queued;
    if (!c.Conserved() || c.offered != sent || sent != accounted ||
        c.forwarded != fr.arrived + fr.propagating) {
      if (why) {
        *why = "flow " + std::to_string(i) + ": sent=" + std::to_string(sent) +
               " offered=" + std::to_string(c.offered) + " arrived=" + std::to_string(fr.arrived) +
               " propagating=" + std::to_string(fr.propagating) +
               " queued=" + std::to_string(c.queued) + " aqm=" + std::to_string(c.aqm_drops) +
               " tail=" + std::to_string(c.tail_drops) +
               " lost=" + std::to_string(c.stochastic_losses);
      }
      return false;
    }
  }
  return true;
}

RunReport Simulation::Run() {
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    loop_.Schedule(Event{SecondsF(flows_[i].spec.start_s), flows_[i].sender_entity,
                         EventKind::kFlowStart, i},
                   [this, i] { flows_[i].sender->Start(); });
  }
  for (const auto& [id, q] : queues_) {
    ScheduleDownOpportunity(id);
    if (q.up) ScheduleUpOpportunity(id);
  }
  loop_.RunUntil(cfg_.Duration());

  RunReport report;
  const SimTime begin = cfg_.Warmup();
  const SimTime end = cfg_.Duration();
  std::vector<FlowId> ids;
  std::vector<double> all_delays;
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    ids.push_back(static_cast<FlowId>(i));
    report.flows.push_back(ComputeFlowMetrics(records_, static_cast<FlowId>(i),
                                              flows_[i].spec.algorithm, cfg_.OneWayProp(), begin,
                                              end));
    report.aggregate.throughput_mbps += report.flows.back().avg_throughput_mbps;
  }
  for (const auto& r : records_) {
    if (r.fate == Fate::kDelivered && *r.delivered_at > begin && *r.delivered_at <= end) {
      all_delays.push_back(ToMillis(PerPacketDelay(r, cfg_.OneWayProp())));
    }
  }
  if (!all_delays.empty()) {
    double sum = 0.0;
    for (double d : all_delays) sum += d;
    report.aggregate.avg_delay_ms = sum / static_cast<double>(all_delays.size());
    report.aggregate.p95_delay_ms = Percentile(std::move(all_delays), 95.0);
  }
  report.timeseries = TimeseriesThroughput(records_, ids, MillisF(cfg_.timeseries_bin_ms), end);
  report.event_digest = loop_.Digest();
  report.events_dispatched = loop_.DispatchedCount();
  report.config_echo = CanonicalText(cfg_);
  report.base_dir = cfg_.base_dir;
  return report;
}

RunReport RunScenario(const ScenarioConfig& cfg) {
  Simulation sim(cfg, BuildTrace(cfg));
  return sim.Run();
}

bool IsSweepKey(const std::string& key) {
  return key == "c2tcp.target_ms" || key == "c2tcp.interval_ms" || key == "loss_prob";
}

std::vector<RunReport> Sweep(const ScenarioConfig& base, const std::string& key,
                             const std::vector<std::string>& values, unsigned max_parallel) {
  if (!IsSweepKey(key)) throw ConfigError("cannot sweep key '" + key + "'");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<ScenarioConfig> configs;
  configs.reserve(values.size());
  for (const auto& v : values) configs.push_back(WithOverride(base, key, v));

  if (max_parallel == 0) max_parallel = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunReport> reports(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += max_parallel) {
    const std::size_t stop = std::min(configs.size(), start + max_parallel);
    std::vector<std::future<RunReport>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, [&configs, i] { return RunScenario(configs[i]); }));
    }
    for (std::size_t i = start; i < stop; ++i) {
      reports[i] = batch[i - start].get();
      reports[i].sweep_key = key;
      reports[i].sweep_value = values[i];
    }
  }
  return reports;
}

}  // namespace c2lab
