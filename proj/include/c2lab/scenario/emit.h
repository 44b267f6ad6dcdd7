#pragma once

#include <string>
#include <vector>

#include "c2lab/scenario/simulation.h"

namespace c2lab {

enum class OutputFormat { kCsv, kJson, kSvg };

/// Parses "csv", "json" or "svg". Throws ConfigError otherwise.
OutputFormat ParseOutputFormat(const std::string& name);

inline constexpr const char* kMetricsCsvHeader =
    "flow_id,algorithm,throughput_mbps,avg_delay_ms,p95_delay_ms,delivered,aqm_drops,tail_drops,"
    "stochastic_losses";
inline constexpr const char* kTimeseriesCsvHeader = "t_ms,flow_id,throughput_mbps";

/// One row per flow under kMetricsCsvHeader.
std::string MetricsCsv(const RunReport& report);

std::string TimeseriesCsv(const RunReport& report);

/// Sweep members collated into one table whose first column is the swept
/// key; one row per (value, flow).
std::string SweepCsv(const std::vector<RunReport>& reports);

/// Everything in the CSVs plus aggregate metrics, digest and config echo.
std::string ReportJson(const RunReport& report);
std::string SweepJson(const std::vector<RunReport>& reports);

/// Throughput against average delay, one point per flow per report. Delay is
/// on a log axis that decreases to the right, so better points sit up and to
/// the right.
std::string ScatterSvg(const std::vector<RunReport>& reports);

/// Each flow's share of delivered throughput over time, as stacked areas.
std::string ShareSvg(const RunReport& report);

/// Writes `content` to `path`. Throws std::runtime_error if the file cannot be
/// written.
void WriteTextFile(const std::string& path, const std::string& content);

/// Writes a run's artifacts into `dir` (created if missing) and returns the
/// paths written: metrics.csv and timeseries.csv, report.json, or scatter.svg
/// and share.svg.
std::vector<std::string> EmitRun(const RunReport& report, const std::string& dir,
                                 OutputFormat format);

/// sweep.csv, sweep.json, or scatter.svg.
std::vector<std::string> EmitSweep(const std::vector<RunReport>& reports, const std::string& dir,
                                   OutputFormat format);

}  // namespace c2lab
