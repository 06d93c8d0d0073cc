#pragma once

#include <string>

#include "acfleet/adam.hpp"
#include "acfleet/checkpoint.hpp"
#include "acfleet/env.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

/// Ring buffer of flat transitions shared by all agents. Minibatches are
/// drawn uniformly without replacement within a batch.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_size);

  void push(const double* obs, uint8_t action, double reward, const double* next_obs);
  size_t size() const { return size_; }
  int obs_size() const { return obs_size_; }

  struct Sample {
    const double* obs;
    const double* next_obs;
    uint8_t action;
    double reward;
  };
  Sample at(size_t index) const;

  /// Fills `out` with `count` distinct indices into [0, size).
  void sample_indices(int count, Rng& rng, std::vector<uint32_t>& out) const;

 private:
  int capacity_;
  int obs_size_;
  int stride_;
  size_t size_ = 0;
  size_t head_ = 0;
  std::vector<double> data_;
  std::vector<uint8_t> actions_;
  std::vector<double> rewards_;
};

struct DqnConfig {
  int episodes = 50;
  int steps_per_episode = 4000;
  double lr = 1e-4;
  double gamma = 0.99;
  double epsilon0 = 1.0;
  double epsilon_decay = 0.995;   // per episode
  double epsilon_min = 0.01;
  int minibatch = 256;
  int buffer_capacity = 65536;
  int learn_start = 1000;         // buffered transitions before updates begin
  int hidden = 100;
  int target_update_period = 0;   // steps between target-net syncs; 0 = online targets
  double huber_delta = 1.0;
  double divergence_loss = 1e6;
  uint64_t seed = 1;
  int jobs = 1;
  int log_every = 5;              // episodes between validation rollouts
  int validation_steps = 1500;
  int validation_warmup = 500;
};

/// Bellman target for one transition.
inline double dqn_target(double reward, double gamma, double max_next_q) {
  return reward + gamma * max_next_q;
}

/// Trains a shared Q-network over augmented observations with epsilon-greedy
/// exploration; every agent feeds the common replay buffer and executes the
/// same network. Throws DivergenceDetected if the loss passes the threshold.
PolicyCheckpoint dqn_train(const EnvConfig& env_config, const DqnConfig& config,
                           const std::string& log_path = "");

}  // namespace acfleet
