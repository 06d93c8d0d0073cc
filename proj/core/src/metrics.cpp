#include "acfleet/metrics.hpp"

#include <cmath>

#include "acfleet/errors.hpp"
#include "acfleet/parallel.hpp"

namespace acfleet {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<SeedMetrics>& rows, double SeedMetrics::*field) {
  MeanStd out;
  const size_t n = rows.size();
  if (n == 0) return out;
  for (const auto& r : rows) out.mean += r.*field;
  out.mean /= static_cast<double>(n);
  if (n > 1) {
    double acc = 0.0;
    for (const auto& r : rows) {
      const double d = r.*field - out.mean;
      acc += d * d;
    }
    out.std = std::sqrt(acc / static_cast<double>(n - 1));
  }
  return out;
}

}  // namespace

MetricsReport MetricsReport::aggregate(std::vector<SeedMetrics> per_seed, int horizon,
                                       int warmup) {
  MetricsReport report;
  report.per_seed = std::move(per_seed);
  report.horizon_steps = horizon;
  report.warmup_steps = warmup;
  const MeanStd sig = mean_std(report.per_seed, &SeedMetrics::signal_rmse_w);
  const MeanStd temp = mean_std(report.per_seed, &SeedMetrics::temp_rmse_c);
  const MeanStd mx = mean_std(report.per_seed, &SeedMetrics::max_temp_rmse_c);
  report.mean_signal_rmse_w = sig.mean;
  report.std_signal_rmse_w = sig.std;
  report.mean_temp_rmse_c = temp.mean;
  report.std_temp_rmse_c = temp.std;
  report.mean_max_temp_rmse_c = mx.mean;
  report.std_max_temp_rmse_c = mx.std;
  return report;
}

SeedMetrics run_rollout(Controller& controller, const EnvConfig& base, uint64_t seed,
                        int horizon_steps, int warmup_steps, const StepObserver& on_step) {
  if (horizon_steps <= warmup_steps) {
    throw ConfigError("rollout: horizon must exceed warmup");
  }
  EnvConfig cfg = base;
  cfg.seed = seed;
  Environment env(cfg);
  controller.on_reset(env);

  const int n = env.num_houses();
  std::vector<uint8_t> actions(static_cast<size_t>(n));

  double sig_sq = 0.0, temp_sq = 0.0, max_sq = 0.0;
  int64_t counted = 0;
  bool diverged = false;

  for (int t = 0; t < horizon_steps; ++t) {
    controller.select_actions(env, actions);
    const StepResult result = env.step(actions);
    diverged |= result.diverged;
    if (on_step) on_step(t, env, result);
    if (t < warmup_steps) continue;

    const double err = (result.consumption_w - result.signal_w) / n;
    sig_sq += err * err;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = env.house(i).air_temp - cfg.target_temp_c;
      temp_sq += d * d;
      worst = std::max(worst, std::abs(d));
    }
    max_sq += worst * worst;
    ++counted;
  }

  SeedMetrics m;
  m.seed = seed;
  m.diverged = diverged;
  if (counted > 0) {
    m.signal_rmse_w = std::sqrt(sig_sq / static_cast<double>(counted));
    m.temp_rmse_c = std::sqrt(temp_sq / (static_cast<double>(counted) * n));
    m.max_temp_rmse_c = std::sqrt(max_sq / static_cast<double>(counted));
  }
  return m;
}

MetricsReport evaluate(const ControllerFactory& make_controller, const EnvConfig& base,
                       std::span<const uint64_t> seeds, const EvaluateOptions& options) {
  std::vector<SeedMetrics> rows(seeds.size());
  parallel_for(seeds.size(), options.jobs, [&](size_t k) {
    std::unique_ptr<Controller> controller = make_controller();
    rows[k] = run_rollout(*controller, base, seeds[k], options.horizon_steps,
                          options.warmup_steps);
  });
  return MetricsReport::aggregate(std::move(rows), options.horizon_steps,
                                  options.warmup_steps);
}

}  // namespace acfleet
