#include "c2lab/scenario/emit.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace c2lab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

const char* Color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string MetricsRow(const FlowMetrics& f) {
  return fmt::format("{},{},{:.3f},{:.3f},{:.3f},{},{},{},{}\n", f.flow_id, f.algorithm,
                     f.avg_throughput_mbps, f.avg_delay_ms, f.p95_delay_ms, f.delivered_count,
                     f.drops.aqm, f.drops.tail, f.drops.stochastic);
}

nlohmann::json FlowJson(const FlowMetrics& f) {
  return {{"flow_id", f.flow_id},
          {"algorithm", f.algorithm},
          {"throughput_mbps", f.avg_throughput_mbps},
          {"avg_delay_ms", f.avg_delay_ms},
          {"p95_delay_ms", f.p95_delay_ms},
          {"delivered", f.delivered_count},
          {"aqm_drops", f.drops.aqm},
          {"tail_drops", f.drops.tail},
          {"stochastic_losses", f.drops.stochastic}};
}

nlohmann::json RunJson(const RunReport& r) {
  nlohmann::json j;
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& f : r.flows) flows.push_back(FlowJson(f));
  j["flows"] = std::move(flows);
  j["aggregate"] = {{"throughput_mbps", r.aggregate.throughput_mbps},
                    {"avg_delay_ms", r.aggregate.avg_delay_ms},
                    {"p95_delay_ms", r.aggregate.p95_delay_ms}};
  nlohmann::json series = nlohmann::json::array();
  for (const auto& p : r.timeseries) {
    series.push_back({{"t_ms", ToMillis(p.t)}, {"flow_id", p.flow_id}, {"throughput_mbps", p.mbps}});
  }
  j["timeseries"] = std::move(series);
  j["event_digest"] = fmt::format("{:016x}", r.event_digest);
  j["events_dispatched"] = r.events_dispatched;
  j["config"] = r.config_echo;
  j["base_dir"] = r.base_dir;
  if (r.sweep_key) {
    j["sweep_key"] = *r.sweep_key;
    j["sweep_value"] = *r.sweep_value;
  }
  return j;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string SvgOpen() {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
}

std::string Axes(const std::string& x_label, const std::string& y_label) {
  const double x0 = kMargin, y0 = kHeight - kMargin, x1 = kWidth - kMargin / 2, y1 = kMargin / 2;
  return fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n"
      "<text x=\"{4}\" y=\"{5}\" text-anchor=\"middle\">{6}</text>\n"
      "<text x=\"15\" y=\"{7}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {7})\">{8}</text>\n",
      x0, y0, x1, y1, (x0 + x1) / 2, kHeight - 15, Escape(x_label), (y0 + y1) / 2,
      Escape(y_label));
}

}  // namespace

OutputFormat ParseOutputFormat(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  if (name == "svg") return OutputFormat::kSvg;
  throw ConfigError("unknown output format '" + name + "' (expected csv, json or svg)");
}

std::string MetricsCsv(const RunReport& report) {
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  for (const auto& f : report.flows) out += MetricsRow(f);
  return out;
}

std::string TimeseriesCsv(const RunReport& report) {
  std::string out = std::string(kTimeseriesCsvHeader) + "\n";
  for (const auto& p : report.timeseries) {
    out += fmt::format("{},{},{:.3f}\n", p.t.count() / 1000, p.flow_id, p.mbps);
  }
  return out;
}

std::string SweepCsv(const std::vector<RunReport>& reports) {
  if (reports.empty()) return "";
  const std::string key = reports.front().sweep_key.value_or("value");
  std::string out = key + "," + kMetricsCsvHeader + "\n";
  for (const auto& r : reports) {
    for (const auto& f : r.flows) out += r.sweep_value.value_or("") + "," + MetricsRow(f);
  }
  return out;
}

std::string ReportJson(const RunReport& report) { return RunJson(report).dump(2) + "\n"; }

std::string SweepJson(const std::vector<RunReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(RunJson(r));
  return j.dump(2) + "\n";
}

std::string ScatterSvg(const std::vector<RunReport>& reports) {
  struct Point {
    double delay;
    double mbps;
    std::string label;
    std::size_t series;
  };
  std::vector<Point> points;
  std::map<std::string, std::size_t> series;
  for (const auto& r : reports) {
    for (const auto& f : r.flows) {
      if (f.delivered_count == 0) continue;
      auto it = series.emplace(f.algorithm, series.size()).first;
      std::string label = f.algorithm;
      if (r.sweep_value) label += " " + *r.sweep_key + "=" + *r.sweep_value;
      points.push_back({std::max(f.avg_delay_ms, 0.1), f.avg_throughput_mbps, label, it->second});
    }
  }
  std::string out = SvgOpen();
  out += Axes("average delay (ms, log scale, lower is right)", "throughput (Mbit/s)");
  if (points.empty()) return out + "</svg>\n";

  double lo = points.front().delay, hi = lo, top = 0.0;
  for (const auto& p : points) {
    lo = std::min(lo, p.delay);
    hi = std::max(hi, p.delay);
    top = std::max(top, p.mbps);
  }
  const double log_lo = std::floor(std::log10(lo));
  const double log_hi = std::max(log_lo + 1.0, std::ceil(std::log10(hi)));
  top = top > 0 ? top * 1.1 : 1.0;
  const double x0 = kMargin, x1 = kWidth - kMargin / 2, y0 = kHeight - kMargin, y1 = kMargin / 2;
  auto px = [&](double d) { return x1 - (std::log10(d) - log_lo) / (log_hi - log_lo) * (x1 - x0); };
  auto py = [&](double m) { return y0 - m / top * (y0 - y1); };

  for (double e = log_lo; e <= log_hi; e += 1.0) {
    const double x = px(std::pow(10.0, e));
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n"
                       "<text x=\"{0:.1f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
                       x, y0, y1, y0 + 14, std::pow(10.0, e));
  }
  for (int i = 0; i <= 4; ++i) {
    const double m = top * i / 4;
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n", x0 - 4,
                       py(m) + 4, m);
  }
  for (const auto& p : points) {
    out += fmt::format(
        "<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\"><title>{}: {:.3f} Mbit/s, "
        "{:.3f} ms</title></circle>\n",
        px(p.delay), py(p.mbps), Color(p.series), Escape(p.label), p.mbps, p.delay);
  }
  double ly = y1 + 10;
  for (const auto& [name, idx] : series) {
    out += fmt::format("<circle cx=\"{0}\" cy=\"{1}\" r=\"4\" fill=\"{2}\"/>"
                       "<text x=\"{3}\" y=\"{4}\">{5}</text>\n",
                       x0 + 12, ly, Color(idx), x0 + 20, ly + 4, Escape(name));
    ly += 14;
  }
  return out + "</svg>\n";
}

std::string ShareSvg(const RunReport& report) {
  std::map<SimTime, std::vector<double>> bins;
  const std::size_t n = report.flows.size();
  for (const auto& p : report.timeseries) {
    auto& v = bins[p.t];
    v.resize(n, 0.0);
    if (p.flow_id < n) v[p.flow_id] = p.mbps;
  }
  std::string out = SvgOpen();
  out += Axes("time (s)", "share of delivered throughput");
  if (bins.empty() || n == 0) return out + "</svg>\n";

  const double x0 = kMargin, x1 = kWidth - kMargin / 2, y0 = kHeight - kMargin, y1 = kMargin / 2;
  const double t_end = ToSeconds(bins.rbegin()->first) + 1e-9;
  auto px = [&](SimTime t) { return x0 + ToSeconds(t) / t_end * (x1 - x0); };
  auto py = [&](double share) { return y0 - share * (y0 - y1); };

  // Cumulative share boundaries per bin; flow i fills between lower[i] and upper[i].
  std::vector<std::vector<double>> cum;
  for (const auto& [t, v] : bins) {
    double total = 0.0;
    for (double x : v) total += x;
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) c[i + 1] = c[i] + (total > 0 ? v[i] / total : 0.0);
    cum.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::string pts;
    std::size_t k = 0;
    for (const auto& [t, v] : bins) pts += fmt::format("{:.1f},{:.1f} ", px(t), py(cum[k++][i + 1]));
    k = cum.size();
    for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
      pts += fmt::format("{:.1f},{:.1f} ", px(it->first), py(cum[--k][i]));
    }
    out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.7\"/>\n", pts, Color(i));
    out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">flow {} ({})</text>\n", x0 + 10,
                       y1 + 12 + 14.0 * i, Color(i), i, Escape(report.flows[i].algorithm));
  }
  for (int i = 0; i <= 4; ++i) {
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n", x0 - 4,
                       py(i / 4.0) + 4, i / 4.0);
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.0f}</text>\n", x1, y0 + 14,
                     t_end);
  return out + "</svg>\n";
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

namespace {

std::filesystem::path PrepareDir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) {
    throw std::runtime_error("cannot create output directory '" + dir + "'");
  }
  return p;
}

}  // namespace

std::vector<std::string> EmitRun(const RunReport& report, const std::string& dir,
                                 OutputFormat format) {
  const auto base = PrepareDir(dir);
  std::vector<std::pair<std::string, std::string>> files;
  switch (format) {
    case OutputFormat::kCsv:
      files = {{"metrics.csv", MetricsCsv(report)}, {"timeseries.csv", TimeseriesCsv(report)}};
      break;
    case OutputFormat::kJson:
      files = {{"report.json", ReportJson(report)}};
      break;
    case OutputFormat::kSvg:
      files = {{"scatter.svg", ScatterSvg({report})}, {"share.svg", ShareSvg(report)}};
      break;
  }
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    written.push_back((base / name).string());
    WriteTextFile(written.back(), content);
  }
  return written;
}

std::vector<std::string> EmitSweep(const std::vector<RunReport>& reports, const std::string& dir,
                                   OutputFormat format) {
  const auto base = PrepareDir(dir);
  std::string name, content;
  switch (format) {
    case OutputFormat::kCsv:
      name = "sweep.csv";
      content = SweepCsv(reports);
      break;
    case OutputFormat::kJson:
      name = "sweep.json";
      content = SweepJson(reports);
      break;
    case OutputFormat::kSvg:
      name = "scatter.svg";
      content = ScatterSvg(reports);
      break;
  }
  const std::string path = (base / name).string();
  WriteTextFile(path, content);
  return {path};
}

}  // namespace c2lab
