#include "acfleet/deploy.hpp"

#include <utility>

#include "acfleet/errors.hpp"

namespace acfleet {

Tensor2 gather_observations(const Environment& env) {
  const int n = env.num_houses();
  Tensor2 out(n, Observation::kFields);
  for (int i = 0; i < n; ++i) {
    env.observation_vector(i, {out.row(i), static_cast<size_t>(out.cols())});
  }
  return out;
}

Tensor2 gather_augmented(Environment& env) {
  const int n = env.num_houses();
  Tensor2 out(n, env.augmented_size());
  for (int i = 0; i < n; ++i) {
    env.augmented_observation(i, {out.row(i), static_cast<size_t>(out.cols())});
  }
  return out;
}

namespace {

// Argmax over a two-output policy head; OFF wins ties.
void greedy_from_values(const Tensor2& values, std::vector<uint8_t>& out) {
  out.resize(static_cast<size_t>(values.rows()));
  for (int i = 0; i < values.rows(); ++i) {
    out[static_cast<size_t>(i)] = values(i, 1) > values(i, 0) ? 1 : 0;
  }
}

/// DQN / PPO feed-forward policies; the input is either the augmented
/// observation (fixed-slot messages) or the plain observation.
class FeedForwardPolicyController final : public Controller {
 public:
  FeedForwardPolicyController(PolicyCheckpoint checkpoint, bool augmented)
      : checkpoint_(std::move(checkpoint)), augmented_(augmented) {}

  std::string name() const override { return agent_kind_name(checkpoint_.kind); }
  bool decentralized() const override { return true; }

  void select_actions(Environment& env, std::vector<uint8_t>& out) override {
    const Tensor2 input =
        augmented_ ? gather_augmented(env) : gather_observations(env);
    const std::string net_name =
        checkpoint_.kind == AgentKind::dqn ? "q" : "actor";
    const Tensor2 values = mlp_forward(checkpoint_.net(net_name), input);
    greedy_from_values(values, out);
  }

 private:
  PolicyCheckpoint checkpoint_;
  bool augmented_;
};

class TarmacController final : public Controller {
 public:
  TarmacController(PolicyCheckpoint checkpoint, double drop_prob, uint64_t seed)
      : checkpoint_(std::move(checkpoint)), drop_prob_(drop_prob), rng_(seed) {
    TarmacDims dims;
    dims.obs = checkpoint_.net("obs2hidden").input_size();
    dims.hidden = checkpoint_.net("obs2hidden").output_size();
    dims.key = checkpoint_.net("hidden2key").output_size();
    dims.comm = checkpoint_.net("hidden2value").output_size();
    dims.actions = checkpoint_.net("actor").output_size();
    dims.rounds = checkpoint_.comm_rounds > 0 ? checkpoint_.comm_rounds : 1;
    actor_.dims = dims;
    actor_.obs2hidden = checkpoint_.net("obs2hidden");
    actor_.hidden2key = checkpoint_.net("hidden2key");
    actor_.hidden2value = checkpoint_.net("hidden2value");
    actor_.hidden2query = checkpoint_.net("hidden2query");
    actor_.post_comm = checkpoint_.net("post_comm");
    actor_.actor = checkpoint_.net("actor");
  }

  std::string name() const override { return "tarmac"; }
  bool decentralized() const override { return true; }

  void on_reset(const Environment& env) override {
    neighbours_.clear();
    for (int i = 0; i < env.num_houses(); ++i) {
      neighbours_.push_back(env.neighbours(i));
    }
  }

  void select_actions(Environment& env, std::vector<uint8_t>& out) override {
    if (neighbours_.size() != static_cast<size_t>(env.num_houses())) on_reset(env);
    const Tensor2 obs = gather_observations(env);
    tarmac_act(actor_, obs, neighbours_, drop_prob_, &rng_, out);
  }

 private:
  PolicyCheckpoint checkpoint_;
  TarmacActor actor_;
  double drop_prob_;
  Rng rng_;
  std::vector<std::vector<int>> neighbours_;
};

}  // namespace

std::unique_ptr<Controller> make_policy_controller(const PolicyCheckpoint& checkpoint,
                                                   const EnvConfig& env_config,
                                                   uint64_t seed) {
  const int ring_de = 2 * (env_config.comm_neighbours / 2);
  switch (checkpoint.kind) {
    case AgentKind::dqn:
    case AgentKind::ppo_he: {
      if (ring_de != checkpoint.ring_size_tr) {
        throw IncompatibleCheckpoint(
            "fixed-slot messages need the deployment neighbour count to match "
            "training (trained N_c=" +
            std::to_string(checkpoint.comm_neighbours_tr) + ", deploying N_c=" +
            std::to_string(env_config.comm_neighbours) + ")");
      }
      const std::string net_name = checkpoint.kind == AgentKind::dqn ? "q" : "actor";
      const int want = Observation::kFields + HeMessage::kFields * ring_de;
      if (checkpoint.net(net_name).input_size() != want) {
        throw IncompatibleCheckpoint("checkpoint input size does not fit environment");
      }
      return std::make_unique<FeedForwardPolicyController>(checkpoint, true);
    }
    case AgentKind::ppo_nc: {
      if (checkpoint.net("actor").input_size() != Observation::kFields) {
        throw IncompatibleCheckpoint("checkpoint input size does not fit environment");
      }
      return std::make_unique<FeedForwardPolicyController>(checkpoint, false);
    }
    case AgentKind::tarmac: {
      if (checkpoint.net("obs2hidden").input_size() != Observation::kFields) {
        throw IncompatibleCheckpoint("checkpoint input size does not fit environment");
      }
      return std::make_unique<TarmacController>(checkpoint, env_config.comm_dropout,
                                                mix_seed(seed, 0x7a));
    }
  }
  throw IncompatibleCheckpoint("unknown agent kind in checkpoint");
}

}  // namespace acfleet
