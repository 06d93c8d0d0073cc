#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "acfleet/metrics.hpp"
#include "acfleet/robustness.hpp"
#include "acfleet/scaling.hpp"
#include "acfleet/timing.hpp"

namespace acfleet {

/// Deterministic shortest-roundtrip formatting so byte-identical configs and
/// seeds give byte-identical files.
std::string format_double(double v);

/// CSV with a leading `# schema <name>` comment line; all numeric cells go
/// through format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema,
            std::span<const std::string> columns);

  void row(std::span<const std::string> cells);
  void cell_row(std::initializer_list<std::string> cells);

 private:
  std::ofstream out_;
  size_t columns_;
};

/// Newline-delimited JSON with a schema line first.
class JsonlWriter {
 public:
  JsonlWriter(const std::string& path, const std::string& schema);
  void line(const std::string& json);

 private:
  std::ofstream out_;
};

void write_metrics_csv(const std::string& path, const std::string& controller,
                       const MetricsReport& report);
void write_scaling_csv(const std::string& path, const std::string& controller,
                       std::span<const ScalingRow> rows);
void write_group_scaling_csv(const std::string& path, const GroupScalingResult& result);
void write_robustness_csv(const std::string& path, const std::string& controller,
                          std::span<const RobustnessRow> rows);
void write_timing_csv(const std::string& path, std::span<const TimingRow> rows);

}  // namespace acfleet
