#pragma once

#include <string>

#include "acfleet/checkpoint.hpp"
#include "acfleet/env.hpp"
#include "acfleet/tarmac.hpp"

namespace acfleet {

/// Which communication scheme the actor trains with: fixed-slot neighbour
/// messages appended to the observation, no communication at all, or
/// attention-based messaging.
enum class CommMode : uint8_t { he, nc, tarmac };

struct PpoConfig {
  int epochs = 50;
  int episodes_per_epoch = 1;
  int steps_per_episode = 4000;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  double gamma = 0.99;
  double clip = 0.2;
  double max_grad_norm = 0.5;
  int updates_per_epoch = 10;  // full passes over the stored epoch memory
  int minibatch = 512;         // (step, agent) samples per gradient step
  int return_truncation_steps = 1000;  // drop tail samples with biased returns
  int hidden = 100;            // feed-forward actor hidden width
  int critic_hidden = 100;     // 128 for the attention agent by convention
  TarmacDims tarmac{};         // attention-actor dimensions (tarmac mode)
  double divergence_loss = 1e6;
  uint64_t seed = 1;
  int jobs = 1;
  int log_every = 5;           // epochs between validation rollouts
  int validation_steps = 1500;
  int validation_warmup = 500;
};

struct PpoTrainStats {
  /// max |p_new/p_old - 1| over the first minibatch of each epoch, before
  /// any update has been applied; should sit at rounding error.
  double max_first_ratio_dev = 0.0;
  double final_actor_loss = 0.0;
  double final_critic_loss = 0.0;
  double actor_checksum = 0.0;
};

/// On-policy training with parameter sharing and a centralized critic fed all
/// agents' observations. Each epoch rolls out the fixed policy, computes
/// within-episode discounted returns, then runs `updates_per_epoch` clipped
/// surrogate passes plus critic regression over the stored memory before
/// erasing it. Throws DivergenceDetected past the loss threshold.
PolicyCheckpoint ppo_train(const EnvConfig& env_config, const PpoConfig& config,
                           CommMode mode, const std::string& log_path = "",
                           PpoTrainStats* stats = nullptr);

}  // namespace acfleet
