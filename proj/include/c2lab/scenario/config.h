#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "c2lab/c2tcp/c2tcp.h"
#include "c2lab/link/bottleneck_link.h"
#include "c2lab/traces/link_trace.h"

namespace c2lab {

/// Malformed or invalid scenario description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceSpec {
  enum class Kind { kFile, kConstant, kStep };
  Kind kind = Kind::kConstant;
  std::string path;  // kFile, resolved against the scenario's directory
  double rate_mbps = 0.0;
  std::vector<TraceStep> steps;
};

struct FlowSpec {
  std::string algorithm;  // newreno | cubic | vegas | c2tcp+newreno | c2tcp+cubic
  double start_s = 0.0;
  std::uint32_t queue = 0;
  C2tcpConfig c2tcp;
};

enum class QueueCapMode { kPackets, kBdp, kUnlimited };
enum class UplinkMode { kFixed, kTrace };

struct ScenarioConfig {
  TraceSpec trace;
  std::vector<FlowSpec> flows;
  QueueCapMode queue_cap_mode = QueueCapMode::kUnlimited;
  std::uint32_t queue_cap_packets = 0;  // kPackets, or kBdp once resolved
  bool queue_cap_resolved = true;       // false while a bdp cap awaits a trace file
  double one_way_prop_delay_ms = 20.0;
  double loss_prob = 0.0;
  AqmKind aqm = AqmKind::kDropTail;
  CodelParams codel;
  std::map<std::uint32_t, AqmKind> queue_aqm;  // per-queue overrides
  UplinkMode uplink = UplinkMode::kFixed;
  double duration_s = 0.0;
  double warmup_s = 0.0;
  std::uint64_t seed = 1;
  double timeseries_bin_ms = 1000.0;

  /// Validated key/value pairs the config was built from; the canonical echo.
  std::map<std::string, std::string> entries;
  std::string base_dir;

  std::optional<std::uint32_t> QueueCap() const;
  AqmKind AqmFor(std::uint32_t queue) const;
  SimTime Duration() const { return SecondsF(duration_s); }
  SimTime Warmup() const { return SecondsF(warmup_s); }
  SimTime OneWayProp() const { return MillisF(one_way_prop_delay_ms); }
};

/// Splits `key = value` lines. '#' starts a comment; blank lines are ignored.
/// Throws ConfigError on a malformed line or a duplicate key.
std::map<std::string, std::string> ParseEntries(std::string_view text);

/// Builds and validates a scenario. Relative trace paths resolve against
/// `base_dir`. A "bdp" queue cap resolves to round(rate * rtt / (8 * mtu))
/// using the trace's mean rate and rtt = 2 * one_way_prop_delay; for a trace
/// file that cannot be read yet, resolution is deferred to run time.
ScenarioConfig LoadConfig(std::string_view text, const std::string& base_dir = ".");
ScenarioConfig ConfigFromEntries(std::map<std::string, std::string> entries,
                                 const std::string& base_dir = ".");
ScenarioConfig LoadConfigFile(const std::string& path);

/// Canonical `key = value` text, sorted by key.
std::string CanonicalText(const ScenarioConfig& cfg);

/// Returns a copy with `key` set to `value`, revalidated. Setting a global
/// c2tcp.* key also clears the matching per-flow overrides.
ScenarioConfig WithOverride(const ScenarioConfig& cfg, const std::string& key,
                            const std::string& value);

/// Parses a trace value: constant:<mbps>, step:<mbps>@<ms>,..., or a file
/// path (optionally prefixed file:) resolved against `base_dir`.
TraceSpec ParseTraceSpec(const std::string& value, const std::string& base_dir = ".");

/// Builds the trace a spec or config describes. Constant traces span 1 s.
LinkTrace BuildTrace(const TraceSpec& spec);
LinkTrace BuildTrace(const ScenarioConfig& cfg);

/// round(rate * rtt / (8 * mtu)), at least 1.
std::uint32_t BdpPackets(double rate_mbps, SimTime rtt, std::uint32_t mtu_bytes);

}  // namespace c2lab
