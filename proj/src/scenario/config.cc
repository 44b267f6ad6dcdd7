#include "c2lab/scenario/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace c2lab {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseReal(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double ParsePositive(const std::string& key, const std::string& value) {
  const double v = ParseReal(key, value);
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

double ParseNonNegative(const std::string& key, const std::string& value) {
  const double v = ParseReal(key, value);
  if (v < 0.0) throw ConfigError(key + ": must be non-negative");
  return v;
}

AqmKind ParseAqm(const std::string& key, const std::string& value) {
  if (value == "droptail") return AqmKind::kDropTail;
  if (value == "codel") return AqmKind::kCodel;
  throw ConfigError(key + ": expected droptail or codel, got '" + value + "'");
}

const std::set<std::string>& GlobalKeys() {
  static const std::set<std::string> keys = {
      "trace",         "duration_s",      "seed",           "queue_cap",
      "one_way_prop_delay_ms",            "loss_prob",      "aqm",
      "codel.target_ms", "codel.interval_ms", "warmup_s",   "uplink",
      "c2tcp.target_ms", "c2tcp.interval_ms", "c2tcp.base", "timeseries_bin_ms",
  };
  return keys;
}

const std::set<std::string>& FlowKeys() {
  static const std::set<std::string> keys = {"algorithm", "start_s", "queue", "c2tcp.target_ms",
                                             "c2tcp.interval_ms"};
  return keys;
}

// Splits "<prefix>.<index>.<rest>"; returns false if `key` lacks that shape.
bool SplitIndexed(const std::string& key, std::string_view prefix, std::uint32_t& index,
                  std::string& rest) {
  if (key.size() <= prefix.size() + 1 || key.compare(0, prefix.size(), prefix) != 0 ||
      key[prefix.size()] != '.') {
    return false;
  }
  const auto start = prefix.size() + 1;
  const auto dot = key.find('.', start);
  if (dot == std::string::npos || dot == start) return false;
  auto [ptr, ec] = std::from_chars(key.data() + start, key.data() + dot, index);
  if (ec != std::errc() || ptr != key.data() + dot) return false;
  rest = key.substr(dot + 1);
  return true;
}

}  // namespace

TraceSpec ParseTraceSpec(const std::string& value, const std::string& base_dir) {
  TraceSpec spec;
  if (value.rfind("constant:", 0) == 0) {
    spec.kind = TraceSpec::Kind::kConstant;
    spec.rate_mbps = ParsePositive("trace", value.substr(9));
    return spec;
  }
  if (value.rfind("step:", 0) == 0) {
    spec.kind = TraceSpec::Kind::kStep;
    std::string_view rest = std::string_view(value).substr(5);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto at = item.find('@');
      if (at == std::string_view::npos) {
        throw ConfigError("trace: step items are <mbps>@<ms>, got '" + std::string(item) + "'");
      }
      const double rate = ParseNonNegative("trace", std::string(item.substr(0, at)));
      const auto ms = ParseUnsigned("trace", std::string(item.substr(at + 1)));
      if (ms == 0 || ms > 0xffffffffULL) throw ConfigError("trace: step duration out of range");
      spec.steps.push_back({rate, static_cast<std::uint32_t>(ms)});
    }
    if (spec.steps.empty()) throw ConfigError("trace: step list is empty");
    return spec;
  }
  spec.kind = TraceSpec::Kind::kFile;
  std::string path = value.rfind("file:", 0) == 0 ? value.substr(5) : value;
  if (path.empty()) throw ConfigError("trace: empty path");
  std::filesystem::path p(path);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  spec.path = p.lexically_normal().string();
  return spec;
}

std::optional<std::uint32_t> ScenarioConfig::QueueCap() const {
  if (queue_cap_mode == QueueCapMode::kUnlimited) return std::nullopt;
  return queue_cap_packets;
}

AqmKind ScenarioConfig::AqmFor(std::uint32_t queue) const {
  auto it = queue_aqm.find(queue);
  return it == queue_aqm.end() ? aqm : it->second;
}

std::uint32_t BdpPackets(double rate_mbps, SimTime rtt, std::uint32_t mtu_bytes) {
  const double bytes = rate_mbps * 1e6 * ToSeconds(rtt) / 8.0;
  const auto pkts = std::llround(bytes / mtu_bytes);
  return static_cast<std::uint32_t>(std::max<long long>(1, pkts));
}

std::map<std::string, std::string> ParseEntries(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ScenarioConfig ConfigFromEntries(std::map<std::string, std::string> entries,
                                 const std::string& base_dir) {
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  std::map<std::uint32_t, std::map<std::string, std::string>> flow_entries;

  for (const auto& [key, value] : entries) {
    std::uint32_t index = 0;
    std::string rest;
    if (GlobalKeys().count(key)) continue;
    if (SplitIndexed(key, "flow", index, rest) && FlowKeys().count(rest)) {
      flow_entries[index][rest] = value;
      continue;
    }
    if (SplitIndexed(key, "queue", index, rest) && rest == "aqm") {
      cfg.queue_aqm[index] = ParseAqm(key, value);
      continue;
    }
    throw ConfigError("unknown key '" + key + "'");
  }

  auto get = [&entries](const std::string& key) -> const std::string* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  const std::string* trace = get("trace");
  if (!trace) throw ConfigError("missing required key 'trace'");
  cfg.trace = ParseTraceSpec(*trace, base_dir);

  const std::string* duration = get("duration_s");
  if (!duration) throw ConfigError("missing required key 'duration_s'");
  cfg.duration_s = ParsePositive("duration_s", *duration);

  if (auto* v = get("seed")) cfg.seed = ParseUnsigned("seed", *v);
  if (auto* v = get("one_way_prop_delay_ms")) {
    cfg.one_way_prop_delay_ms = ParseNonNegative("one_way_prop_delay_ms", *v);
  }
  if (auto* v = get("loss_prob")) {
    cfg.loss_prob = ParseReal("loss_prob", *v);
    if (!(cfg.loss_prob >= 0.0 && cfg.loss_prob <= 1.0)) {
      throw ConfigError("loss_prob: must be in [0, 1]");
    }
  }
  if (auto* v = get("aqm")) cfg.aqm = ParseAqm("aqm", *v);
  if (auto* v = get("codel.target_ms")) {
    cfg.codel.target = MillisF(ParsePositive("codel.target_ms", *v));
  }
  if (auto* v = get("codel.interval_ms")) {
    cfg.codel.interval = MillisF(ParsePositive("codel.interval_ms", *v));
  }
  if (auto* v = get("warmup_s")) cfg.warmup_s = ParseNonNegative("warmup_s", *v);
  if (cfg.warmup_s >= cfg.duration_s) throw ConfigError("warmup_s: must be below duration_s");
  if (auto* v = get("timeseries_bin_ms")) {
    cfg.timeseries_bin_ms = ParsePositive("timeseries_bin_ms", *v);
  }
  if (auto* v = get("uplink")) {
    if (*v == "fixed") {
      cfg.uplink = UplinkMode::kFixed;
    } else if (*v == "trace") {
      cfg.uplink = UplinkMode::kTrace;
    } else {
      throw ConfigError("uplink: expected fixed or trace, got '" + *v + "'");
    }
  }

  C2tcpConfig c2_defaults;
  if (auto* v = get("c2tcp.target_ms")) {
    c2_defaults.target = MillisF(ParsePositive("c2tcp.target_ms", *v));
  }
  if (auto* v = get("c2tcp.interval_ms")) {
    c2_defaults.interval = MillisF(ParsePositive("c2tcp.interval_ms", *v));
  }
  if (auto* v = get("c2tcp.base")) {
    if (*v != "newreno" && *v != "cubic") {
      throw ConfigError("c2tcp.base: expected newreno or cubic, got '" + *v + "'");
    }
    c2_defaults.base_algorithm = *v;
  }
  if (c2_defaults.target.count() <= 0 || c2_defaults.interval.count() <= 0) {
    throw ConfigError("c2tcp target and interval must be at least 1 us");
  }

  if (flow_entries.empty()) throw ConfigError("at least one flow is required");
  std::uint32_t expected = 0;
  for (auto& [index, fe] : flow_entries) {
    const std::string prefix = "flow." + std::to_string(index) + ".";
    if (index != expected++) {
      throw ConfigError("flow indices must be contiguous from 0; missing flow." +
                        std::to_string(expected - 1));
    }
    FlowSpec flow;
    flow.c2tcp = c2_defaults;
    auto it = fe.find("algorithm");
    if (it == fe.end()) throw ConfigError("missing required key '" + prefix + "algorithm'");
    const std::string& alg = it->second;
    if (alg == "newreno" || alg == "cubic" || alg == "vegas") {
      flow.algorithm = alg;
    } else if (alg == "c2tcp+newreno" || alg == "c2tcp+cubic") {
      flow.algorithm = alg;
      flow.c2tcp.base_algorithm = alg.substr(6);
    } else if (alg == "c2tcp") {
      flow.algorithm = "c2tcp+" + c2_defaults.base_algorithm;
    } else {
      throw ConfigError(prefix + "algorithm: unknown algorithm '" + alg + "'");
    }
    if (auto s = fe.find("start_s"); s != fe.end()) {
      flow.start_s = ParseNonNegative(prefix + "start_s", s->second);
    }
    if (auto q = fe.find("queue"); q != fe.end()) {
      const auto v = ParseUnsigned(prefix + "queue", q->second);
      if (v > 0xffffu) throw ConfigError(prefix + "queue: id too large");
      flow.queue = static_cast<std::uint32_t>(v);
    }
    if (auto t = fe.find("c2tcp.target_ms"); t != fe.end()) {
      flow.c2tcp.target = MillisF(ParsePositive(prefix + "c2tcp.target_ms", t->second));
    }
    if (auto t = fe.find("c2tcp.interval_ms"); t != fe.end()) {
      flow.c2tcp.interval = MillisF(ParsePositive(prefix + "c2tcp.interval_ms", t->second));
    }
    if (flow.start_s >= cfg.duration_s) {
      throw ConfigError(prefix + "start_s: flow must start before duration_s");
    }
    cfg.flows.push_back(std::move(flow));
  }

  if (auto* v = get("queue_cap")) {
    if (*v == "unlimited") {
      cfg.queue_cap_mode = QueueCapMode::kUnlimited;
    } else if (*v == "bdp") {
      cfg.queue_cap_mode = QueueCapMode::kBdp;
    } else {
      const auto n = ParseUnsigned("queue_cap", *v);
      if (n == 0 || n > 0xffffffffULL) throw ConfigError("queue_cap: must be a positive count");
      cfg.queue_cap_mode = QueueCapMode::kPackets;
      cfg.queue_cap_packets = static_cast<std::uint32_t>(n);
    }
  }

  // Synthetic traces are validated here; files are opened at run time.
  if (cfg.trace.kind != TraceSpec::Kind::kFile) {
    try {
      (void)BuildTrace(cfg);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("trace: ") + e.what());
    }
  }
  if (cfg.queue_cap_mode == QueueCapMode::kBdp) {
    cfg.queue_cap_resolved = false;
    if (cfg.trace.kind != TraceSpec::Kind::kFile || std::filesystem::exists(cfg.trace.path)) {
      try {
        const LinkTrace t = BuildTrace(cfg);
        cfg.queue_cap_packets =
            BdpPackets(t.MeanRateMbps(), 2 * cfg.OneWayProp(), t.mtu_bytes());
        cfg.queue_cap_resolved = true;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("trace: ") + e.what());
      } catch (const std::runtime_error&) {
        // Unreadable file: left for the run to report.
      }
    }
  }

  cfg.entries = std::move(entries);
  return cfg;
}

ScenarioConfig LoadConfig(std::string_view text, const std::string& base_dir) {
  return ConfigFromEntries(ParseEntries(text), base_dir);
}

ScenarioConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return LoadConfig(buf.str(), dir.empty() ? std::string(".") : dir.string());
}

std::string CanonicalText(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : cfg.entries) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

ScenarioConfig WithOverride(const ScenarioConfig& cfg, const std::string& key,
                            const std::string& value) {
  auto entries = cfg.entries;
  if (key.rfind("c2tcp.", 0) == 0) {
    for (auto it = entries.begin(); it != entries.end();) {
      std::uint32_t index = 0;
      std::string rest;
      if (SplitIndexed(it->first, "flow", index, rest) && rest == key) {
        it = entries.erase(it);
      } else {
        ++it;
      }
    }
  }
  entries[key] = value;
  return ConfigFromEntries(std::move(entries), cfg.base_dir);
}

LinkTrace BuildTrace(const TraceSpec& spec) {
  switch (spec.kind) {
    case TraceSpec::Kind::kConstant:
      return GenConstantTrace(spec.rate_mbps, 1000);
    case TraceSpec::Kind::kStep:
      return GenStepTrace(spec.steps);
    case TraceSpec::Kind::kFile:
      return LoadTraceFile(spec.path);
  }
  throw std::logic_error("unreachable trace kind");
}

LinkTrace BuildTrace(const ScenarioConfig& cfg) { return BuildTrace(cfg.trace); }

}  // namespace c2lab
