#include "c2lab/corpus/golden.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "c2lab/scenario/emit.h"
#include "c2lab/scenario/simulation.h"

namespace c2lab {

namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string DescribeDiff(const std::string& expected, const std::string& actual) {
  const auto a = Lines(expected), b = Lines(actual);
  std::string out;
  int shown = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()) && shown < 5; ++i) {
    const std::string* x = i < a.size() ? &a[i] : nullptr;
    const std::string* y = i < b.size() ? &b[i] : nullptr;
    if (x && y && *x == *y) continue;
    out += fmt::format("line {}:\n  - {}\n  + {}\n", i + 1, x ? *x : "<missing>",
                       y ? *y : "<missing>");
    ++shown;
  }
  if (out.empty()) out = "contents differ in line endings or trailing bytes\n";
  return out;
}

std::optional<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<GoldenCase>& GoldenCases() {
  static const std::vector<GoldenCase> cases = {
      {"head-to-head", "scenarios/head-to-head.conf", std::nullopt, {}},
      {"codel-comparison", "scenarios/codel-comparison.conf", std::nullopt, {}},
      {"fairness", "scenarios/fairness.conf", std::nullopt, {}},
      {"loss-sweep", "scenarios/loss-sweep.conf", "loss_prob", {"0", "0.005", "0.01", "0.02", "0.05"}},
      {"target-sweep", "scenarios/target-interval-sweep.conf", "c2tcp.target_ms",
       {"50", "60", "70", "80", "90", "100"}},
      {"interval-sweep", "scenarios/target-interval-sweep.conf", "c2tcp.interval_ms",
       {"75", "100", "150", "200"}},
  };
  return cases;
}

const GoldenCase& FindGoldenCase(const std::string& id) {
  for (const auto& c : GoldenCases()) {
    if (c.id == id) return c;
  }
  throw std::invalid_argument("unknown golden case '" + id + "'");
}

std::string GoldenPath(const std::string& root, const std::string& id) {
  return (std::filesystem::path(root) / "golden" / (id + ".csv")).string();
}

std::string RenderGoldenCsv(const GoldenCase& c, const std::string& root,
                            std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = LoadConfigFile((std::filesystem::path(root) / c.scenario).string());
  if (seed) cfg = WithOverride(cfg, "seed", std::to_string(*seed));
  if (!c.sweep_key) return MetricsCsv(RunScenario(cfg));
  return SweepCsv(Sweep(cfg, *c.sweep_key, c.sweep_values));
}

GoldenResult VerifyGolden(const std::string& id, const std::string& root,
                          std::optional<std::uint64_t> seed) {
  const GoldenCase& c = FindGoldenCase(id);
  const std::string path = GoldenPath(root, id);
  const auto expected = ReadFile(path);
  if (!expected) throw GoldenMissing("no golden file for '" + id + "' at " + path);
  const std::string actual = RenderGoldenCsv(c, root, seed);
  GoldenResult r;
  r.pass = actual == *expected;
  if (!r.pass) r.diff = DescribeDiff(*expected, actual);
  return r;
}

void RefreshGolden(const std::string& id, const std::string& root, std::ostream& log) {
  const GoldenCase& c = FindGoldenCase(id);
  const std::string path = GoldenPath(root, id);
  const auto old = ReadFile(path);
  const std::string fresh = RenderGoldenCsv(c, root);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  WriteTextFile(path, fresh);
  if (!old) {
    log << "refresh " << id << ": created " << path << "\n";
  } else if (*old == fresh) {
    log << "refresh " << id << ": unchanged\n";
  } else {
    log << "refresh " << id << ": rewrote " << path << "\n" << DescribeDiff(*old, fresh);
  }
}

}  // namespace c2lab
