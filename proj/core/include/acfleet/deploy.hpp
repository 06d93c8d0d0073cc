#pragma once

#include <memory>

#include "acfleet/checkpoint.hpp"
#include "acfleet/controllers.hpp"
#include "acfleet/tarmac.hpp"

namespace acfleet {

/// Normalized per-agent observations, one row per agent.
Tensor2 gather_observations(const Environment& env);
/// Normalized observations concatenated with neighbour messages (consumes
/// the environment's message-dropout stream).
Tensor2 gather_augmented(Environment& env);

/// Wraps a trained policy as a deployable controller with greedy (argmax)
/// action selection. Decentralized: each agent's action depends only on its
/// own observation and messages.
///
/// Throws IncompatibleCheckpoint when the environment cannot feed the policy:
/// fixed-slot (hand-engineered) message layouts require the deployment ring
/// to match the training ring exactly; attention-based policies accept any
/// neighbour count.
std::unique_ptr<Controller> make_policy_controller(const PolicyCheckpoint& checkpoint,
                                                   const EnvConfig& env_config,
                                                   uint64_t seed = 1);

}  // namespace acfleet
