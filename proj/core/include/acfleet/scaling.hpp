#pragma once

#include <span>

#include "acfleet/checkpoint.hpp"
#include "acfleet/metrics.hpp"

namespace acfleet {

/// Monte-Carlo check of the error-averaging argument: k independent groups
/// with unbiased Gaussian tracking errors should shrink the per-agent RMSE
/// like 1/sqrt(k). A detectable bias in the group errors voids the argument
/// and flags the ratio test as inapplicable.
struct GroupScalingResult {
  std::vector<int> group_counts;
  std::vector<double> per_agent_rmse;  // one per k, arbitrary group size 1
  std::vector<double> ratio_vs_k1;     // per_agent_rmse[k] / per_agent_rmse[k=1]
  bool bias_flagged = false;
};

GroupScalingResult synthetic_group_scaling(std::span<const int> group_counts,
                                           int samples, double sigma_w, uint64_t seed,
                                           double bias_w = 0.0);

struct ScalingRow {
  int n_de = 0;
  MetricsReport report;
};

/// Deploys one checkpoint on growing homogeneous fleets.
std::vector<ScalingRow> scaling_study(const PolicyCheckpoint& checkpoint,
                                      const EnvConfig& base, std::span<const int> n_de,
                                      std::span<const uint64_t> seeds,
                                      const EvaluateOptions& options = {});

}  // namespace acfleet
