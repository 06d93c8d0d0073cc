#include "acfleet/scaling.hpp"

#include <cmath>

#include "acfleet/deploy.hpp"
#include "acfleet/errors.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

GroupScalingResult synthetic_group_scaling(std::span<const int> group_counts,
                                           int samples, double sigma_w, uint64_t seed,
                                           double bias_w) {
  if (samples < 2 || !(sigma_w > 0.0)) {
    throw ConfigError("group scaling: need samples >= 2 and sigma > 0");
  }
  GroupScalingResult out;
  Rng rng(seed);

  double mean_acc = 0.0;
  int64_t draws = 0;

  for (int k : group_counts) {
    if (k < 1) throw ConfigError("group scaling: k must be >= 1");
    double sq = 0.0;
    for (int s = 0; s < samples; ++s) {
      double total = 0.0;
      for (int g = 0; g < k; ++g) {
        const double e = rng.normal(bias_w, sigma_w);
        total += e;
        mean_acc += e;
        ++draws;
      }
      // Groups of unit size: per-agent error is the aggregate over k agents.
      const double per_agent = total / k;
      sq += per_agent * per_agent;
    }
    out.group_counts.push_back(k);
    out.per_agent_rmse.push_back(std::sqrt(sq / samples));
  }

  // The 1/sqrt(k) argument needs zero-mean group errors; flag otherwise.
  const double sample_mean = mean_acc / static_cast<double>(draws);
  out.bias_flagged =
      std::abs(sample_mean) > 4.0 * sigma_w / std::sqrt(static_cast<double>(draws));

  double base = 0.0;
  for (size_t i = 0; i < out.group_counts.size(); ++i) {
    if (out.group_counts[i] == 1) base = out.per_agent_rmse[i];
  }
  for (double r : out.per_agent_rmse) {
    out.ratio_vs_k1.push_back(base > 0.0 ? r / base : 0.0);
  }
  return out;
}

std::vector<ScalingRow> scaling_study(const PolicyCheckpoint& checkpoint,
                                      const EnvConfig& base, std::span<const int> n_de,
                                      std::span<const uint64_t> seeds,
                                      const EvaluateOptions& options) {
  std::vector<ScalingRow> rows;
  for (int n : n_de) {
    EnvConfig cfg = base;
    cfg.houses = n;
    if (cfg.comm_neighbours >= n) cfg.comm_neighbours = n - 1;
    ScalingRow row;
    row.n_de = n;
    row.report = evaluate(
        [&] { return make_policy_controller(checkpoint, cfg, cfg.seed); }, cfg, seeds,
        options);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace acfleet
