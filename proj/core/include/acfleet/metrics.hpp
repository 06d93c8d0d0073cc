#pragma once

#include <functional>
#include <span>
#include <vector>

#include "acfleet/controllers.hpp"

namespace acfleet {

struct SeedMetrics {
  uint64_t seed = 0;
  double signal_rmse_w = 0.0;    // RMSE of (P - s)/N past warmup
  double temp_rmse_c = 0.0;      // RMSE of Th - TT over agents and steps
  double max_temp_rmse_c = 0.0;  // RMSE over steps of max_i |Th_i - TT|
  bool diverged = false;
};

/// Mean and sample standard deviation (n-1 denominator) over seeds.
struct MetricsReport {
  std::vector<SeedMetrics> per_seed;
  double mean_signal_rmse_w = 0.0, std_signal_rmse_w = 0.0;
  double mean_temp_rmse_c = 0.0, std_temp_rmse_c = 0.0;
  double mean_max_temp_rmse_c = 0.0, std_max_temp_rmse_c = 0.0;
  int horizon_steps = 0;
  int warmup_steps = 0;

  static MetricsReport aggregate(std::vector<SeedMetrics> per_seed, int horizon,
                                 int warmup);
};

struct EvaluateOptions {
  int horizon_steps = 43200;  // two days at 4 s
  int warmup_steps = 5000;
  int jobs = 1;
};

/// Called after every step during a recorded rollout.
using StepObserver =
    std::function<void(int step, const Environment& env, const StepResult& result)>;

/// One seeded rollout under a controller; metrics accumulate from
/// `warmup_steps` on (step indices count from 0).
SeedMetrics run_rollout(Controller& controller, const EnvConfig& base, uint64_t seed,
                        int horizon_steps, int warmup_steps,
                        const StepObserver& on_step = {});

/// Evaluates a controller over several seeds, in parallel when jobs > 1;
/// per-seed results are ordered by the input seed list regardless of worker
/// scheduling.
MetricsReport evaluate(const ControllerFactory& make_controller, const EnvConfig& base,
                       std::span<const uint64_t> seeds,
                       const EvaluateOptions& options = {});

}  // namespace acfleet
