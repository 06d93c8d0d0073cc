#include "acfleet/io.hpp"

#include <cstdio>

#include "acfleet/errors.hpp"

namespace acfleet {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema,
                     std::span<const std::string> columns)
    : out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot open CSV for writing: " + path);
  out_ << "# schema " << schema << "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw ConfigError("CSV row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
}

void CsvWriter::cell_row(std::initializer_list<std::string> cells) {
  row(std::vector<std::string>(cells));
}

JsonlWriter::JsonlWriter(const std::string& path, const std::string& schema)
    : out_(path, std::ios::trunc) {
  if (!out_) throw ConfigError("cannot open JSONL for writing: " + path);
  out_ << "{\"schema\":\"" << schema << "\"}\n";
}

void JsonlWriter::line(const std::string& json) { out_ << json << "\n"; }

namespace {

const std::vector<std::string> kMetricColumns = {
    "controller",        "seed",          "signal_rmse_w", "temp_rmse_c",
    "max_temp_rmse_c",   "diverged"};

void metric_rows(CsvWriter& csv, const std::string& controller,
                 const MetricsReport& report, const std::string& label_prefix = "") {
  const std::string name = label_prefix.empty() ? controller : label_prefix;
  for (const SeedMetrics& m : report.per_seed) {
    csv.cell_row({name, std::to_string(m.seed), format_double(m.signal_rmse_w),
                  format_double(m.temp_rmse_c), format_double(m.max_temp_rmse_c),
                  m.diverged ? "1" : "0"});
  }
  csv.cell_row({name, "mean", format_double(report.mean_signal_rmse_w),
                format_double(report.mean_temp_rmse_c),
                format_double(report.mean_max_temp_rmse_c), "0"});
  csv.cell_row({name, "std", format_double(report.std_signal_rmse_w),
                format_double(report.std_temp_rmse_c),
                format_double(report.std_max_temp_rmse_c), "0"});
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::string& controller,
                       const MetricsReport& report) {
  CsvWriter csv(path, "acfleet.metrics.v1", kMetricColumns);
  metric_rows(csv, controller, report);
}

void write_scaling_csv(const std::string& path, const std::string& controller,
                       std::span<const ScalingRow> rows) {
  CsvWriter csv(path, "acfleet.scaling.v1", kMetricColumns);
  for (const ScalingRow& row : rows) {
    metric_rows(csv, controller, row.report,
                controller + "@n" + std::to_string(row.n_de));
  }
}

void write_group_scaling_csv(const std::string& path, const GroupScalingResult& result) {
  const std::vector<std::string> columns = {"groups", "per_agent_rmse_w",
                                            "ratio_vs_k1", "bias_flagged"};
  CsvWriter csv(path, "acfleet.group_scaling.v1", columns);
  for (size_t i = 0; i < result.group_counts.size(); ++i) {
    csv.cell_row({std::to_string(result.group_counts[i]),
                  format_double(result.per_agent_rmse[i]),
                  format_double(result.ratio_vs_k1[i]),
                  result.bias_flagged ? "1" : "0"});
  }
}

void write_robustness_csv(const std::string& path, const std::string& controller,
                          std::span<const RobustnessRow> rows) {
  std::vector<std::string> columns = kMetricColumns;
  columns.insert(columns.begin(), "disturbance");
  CsvWriter csv(path, "acfleet.robustness.v1", columns);
  for (const RobustnessRow& row : rows) {
    for (const SeedMetrics& m : row.report.per_seed) {
      csv.cell_row({row.label, controller, std::to_string(m.seed),
                    format_double(m.signal_rmse_w), format_double(m.temp_rmse_c),
                    format_double(m.max_temp_rmse_c), m.diverged ? "1" : "0"});
    }
    csv.cell_row({row.label, controller, "mean",
                  format_double(row.report.mean_signal_rmse_w),
                  format_double(row.report.mean_temp_rmse_c),
                  format_double(row.report.mean_max_temp_rmse_c), "0"});
    csv.cell_row({row.label, controller, "std",
                  format_double(row.report.std_signal_rmse_w),
                  format_double(row.report.std_temp_rmse_c),
                  format_double(row.report.std_max_temp_rmse_c), "0"});
  }
}

void write_timing_csv(const std::string& path, std::span<const TimingRow> rows) {
  const std::vector<std::string> columns = {
      "controller", "decentralized", "n_de", "seconds_per_step_system",
      "seconds_per_step_per_agent"};
  CsvWriter csv(path, "acfleet.timing.v1", columns);
  for (const TimingRow& row : rows) {
    csv.cell_row({row.controller, row.decentralized ? "1" : "0",
                  std::to_string(row.n_de),
                  format_double(row.seconds_per_step_system),
                  format_double(row.seconds_per_step_per_agent)});
  }
}

}  // namespace acfleet
