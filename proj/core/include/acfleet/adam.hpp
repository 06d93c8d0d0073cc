#pragma once

#include "acfleet/mlp.hpp"

namespace acfleet {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over one Mlp's parameters. Deterministic: two
/// identical (net, grads) sequences produce bit-identical trajectories.
class AdamState {
 public:
  AdamState(const Mlp& net, AdamConfig config);

  void step(Mlp& net, const MlpGrads& grads);
  int64_t updates() const { return updates_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  MlpGrads m_;
  MlpGrads v_;
  int64_t updates_ = 0;
};

}  // namespace acfleet
