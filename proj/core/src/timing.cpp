#include "acfleet/timing.hpp"

#include <chrono>
#include <limits>

namespace acfleet {

TimingRow time_controller(Controller& controller, const EnvConfig& base, uint64_t seed,
                          int steps, int reps, int warmup_steps) {
  EnvConfig cfg = base;
  cfg.seed = seed;
  Environment env(cfg);
  controller.on_reset(env);

  std::vector<uint8_t> actions(static_cast<size_t>(env.num_houses()));
  for (int t = 0; t < warmup_steps; ++t) {
    controller.select_actions(env, actions);
    env.step(actions);
  }

  using clock = std::chrono::steady_clock;
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < reps; ++rep) {
    double total = 0.0;
    for (int t = 0; t < steps; ++t) {
      const auto t0 = clock::now();
      controller.select_actions(env, actions);
      const auto t1 = clock::now();
      total += std::chrono::duration<double>(t1 - t0).count();
      env.step(actions);
    }
    best = std::min(best, total);
  }

  TimingRow row;
  row.controller = controller.name();
  row.decentralized = controller.decentralized();
  row.n_de = env.num_houses();
  row.seconds_per_step_system = best / steps;
  row.seconds_per_step_per_agent = row.seconds_per_step_system / env.num_houses();
  return row;
}

}  // namespace acfleet
