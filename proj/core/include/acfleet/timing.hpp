#pragma once

#include <string>

#include "acfleet/controllers.hpp"

namespace acfleet {

struct TimingRow {
  std::string controller;
  bool decentralized = false;
  int n_de = 0;
  double seconds_per_step_system = 0.0;     // whole fleet, one action selection
  double seconds_per_step_per_agent = 0.0;  // system time / N (decentralized view)
};

/// Wall time of action selection only (environment stepping excluded),
/// averaged over `steps` selections; the fastest of `reps` repetitions is
/// kept to suppress scheduler noise. The environment is warmed up first so
/// the measured state is representative.
TimingRow time_controller(Controller& controller, const EnvConfig& base, uint64_t seed,
                          int steps = 25, int reps = 8, int warmup_steps = 100);

}  // namespace acfleet
