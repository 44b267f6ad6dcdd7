// Command-line front end: run, sweep and validate scenarios, generate traces,
// and check or refresh golden files.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 golden
// mismatch.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "c2lab/corpus/golden.h"
#include "c2lab/scenario/emit.h"
#include "c2lab/scenario/simulation.h"

namespace {

using namespace c2lab;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitGoldenDiff = 3;

std::vector<std::string> SplitValues(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void PrintSummary(const RunReport& r) {
  for (const auto& f : r.flows) {
    fmt::print("flow {} {:<14} {:8.3f} Mbit/s  avg {:9.3f} ms  p95 {:9.3f} ms\n", f.flow_id,
               f.algorithm, f.avg_throughput_mbps, f.avg_delay_ms, f.p95_delay_ms);
  }
  fmt::print("digest {:016x} ({} events)\n", r.event_digest, r.events_dispatched);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven congestion-control lab"};
  app.require_subcommand(1);

  std::string scenario, out_dir = ".", format = "csv", key, values;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--format", format, "csv, json or svg");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep->add_option("scenario", scenario, "Scenario file")->required();
  sweep->add_option("--key", key, "c2tcp.target_ms, c2tcp.interval_ms or loss_prob")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--format", format, "csv, json or svg");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", scenario, "Scenario file")->required();

  std::string root = C2LAB_SOURCE_DIR;
  std::vector<std::string> ids;
  auto* verify = app.add_subcommand("verify-golden", "Compare fresh runs against golden CSVs");
  verify->add_option("ids", ids, "Golden case ids (default: all)");
  verify->add_option("--root", root, "Repository root");
  verify->add_option("--seed", seed, "Override the pinned seed");

  auto* refresh = app.add_subcommand("refresh-golden", "Regenerate golden CSVs");
  refresh->add_option("ids", ids, "Golden case ids (default: all)");
  refresh->add_option("--root", root, "Repository root");

  std::string trace_spec, trace_out;
  std::uint64_t walk_seed = 1;
  double walk_start = 12, walk_min = 1, walk_max = 30;
  std::uint32_t walk_step = 500, walk_duration = 60000;
  auto* gen = app.add_subcommand("gen-trace", "Write a synthetic trace in Mahimahi format");
  gen->add_option("spec", trace_spec, "constant:<mbps>, step:<mbps>@<ms>,..., or random-walk")
      ->required();
  gen->add_option("--out", trace_out, "Output file (default: stdout)");
  gen->add_option("--seed", walk_seed, "random-walk seed");
  gen->add_option("--start", walk_start, "random-walk starting rate (Mbit/s)");
  gen->add_option("--min", walk_min, "random-walk lower bound (Mbit/s)");
  gen->add_option("--max", walk_max, "random-walk upper bound (Mbit/s)");
  gen->add_option("--step-ms", walk_step, "random-walk re-draw period");
  gen->add_option("--duration-ms", walk_duration, "random-walk length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ScenarioConfig cfg = LoadConfigFile(scenario);
      if (seed) cfg = WithOverride(cfg, "seed", std::to_string(*seed));
      const OutputFormat fmt_kind = ParseOutputFormat(format);
      const RunReport report = RunScenario(cfg);
      PrintSummary(report);
      for (const auto& path : EmitRun(report, out_dir, fmt_kind)) fmt::print("wrote {}\n", path);
    } else if (*sweep) {
      const ScenarioConfig cfg = LoadConfigFile(scenario);
      const OutputFormat fmt_kind = ParseOutputFormat(format);
      const auto reports = Sweep(cfg, key, SplitValues(values));
      for (const auto& r : reports) {
        fmt::print("{} = {}\n", key, *r.sweep_value);
        PrintSummary(r);
      }
      for (const auto& path : EmitSweep(reports, out_dir, fmt_kind)) fmt::print("wrote {}\n", path);
    } else if (*validate) {
      const ScenarioConfig cfg = LoadConfigFile(scenario);
      fmt::print("{}: ok ({} flows)\n{}", scenario, cfg.flows.size(), CanonicalText(cfg));
    } else if (*verify) {
      if (ids.empty()) {
        for (const auto& c : GoldenCases()) ids.push_back(c.id);
      }
      bool all_pass = true;
      for (const auto& id : ids) {
        const GoldenResult r = VerifyGolden(id, root, seed);
        fmt::print("{}: {}\n{}", id, r.pass ? "pass" : "DIFF", r.diff);
        all_pass = all_pass && r.pass;
      }
      if (!all_pass) return kExitGoldenDiff;
    } else if (*refresh) {
      if (ids.empty()) {
        for (const auto& c : GoldenCases()) ids.push_back(c.id);
      }
      for (const auto& id : ids) RefreshGolden(id, root, std::cout);
    } else if (*gen) {
      LinkTrace trace = trace_spec == "random-walk"
                            ? GenRandomWalkTrace(walk_seed, walk_start, walk_min, walk_max,
                                                 walk_step, walk_duration)
                            : BuildTrace(ParseTraceSpec(trace_spec));
      if (trace_out.empty()) {
        std::fputs(trace.Serialize().c_str(), stdout);
      } else {
        WriteTextFile(trace_out, trace.Serialize());
      }
      std::fprintf(stderr, "%zu opportunities, period %u ms, mean %.3f Mbit/s\n",
                   trace.opportunities().size(), trace.period_ms(), trace.MeanRateMbps());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
