#include "acfleet/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "acfleet/deploy.hpp"
#include "acfleet/errors.hpp"
#include "acfleet/ops.hpp"
#include "acfleet/parallel.hpp"

namespace acfleet {

ReplayBuffer::ReplayBuffer(int capacity, int obs_size)
    : capacity_(capacity),
      obs_size_(obs_size),
      stride_(2 * obs_size),
      data_(static_cast<size_t>(capacity) * static_cast<size_t>(2 * obs_size)),
      actions_(static_cast<size_t>(capacity)),
      rewards_(static_cast<size_t>(capacity)) {}

void ReplayBuffer::push(const double* obs, uint8_t action, double reward,
                        const double* next_obs) {
  double* slot = data_.data() + head_ * static_cast<size_t>(stride_);
  std::copy(obs, obs + obs_size_, slot);
  std::copy(next_obs, next_obs + obs_size_, slot + obs_size_);
  actions_[head_] = action;
  rewards_[head_] = reward;
  head_ = (head_ + 1) % static_cast<size_t>(capacity_);
  size_ = std::min(size_ + 1, static_cast<size_t>(capacity_));
}

ReplayBuffer::Sample ReplayBuffer::at(size_t index) const {
  const double* slot = data_.data() + index * static_cast<size_t>(stride_);
  return {slot, slot + obs_size_, actions_[index], rewards_[index]};
}

void ReplayBuffer::sample_indices(int count, Rng& rng, std::vector<uint32_t>& out) const {
  out.clear();
  const uint32_t n = static_cast<uint32_t>(size_);
  if (count >= static_cast<int>(n)) {
    for (uint32_t i = 0; i < n; ++i) out.push_back(i);
    return;
  }
  // Rejection sampling; duplicates are rare at our batch/buffer ratios.
  while (out.size() < static_cast<size_t>(count)) {
    const uint32_t candidate = static_cast<uint32_t>(rng.below(n));
    if (std::find(out.begin(), out.end(), candidate) == out.end()) {
      out.push_back(candidate);
    }
  }
}

namespace {

struct QuickRmse {
  double signal = 0.0;
  double temp = 0.0;
};

// Short greedy rollout on a held-out environment, for training logs.
QuickRmse validation_rollout(const Mlp& qnet, const EnvConfig& base, uint64_t seed,
                             int steps, int warmup) {
  EnvConfig cfg = base;
  cfg.seed = seed;
  Environment env(cfg);
  std::vector<uint8_t> actions(static_cast<size_t>(env.num_houses()));
  double sig_sq = 0.0, temp_sq = 0.0;
  int sig_n = 0, temp_n = 0;
  for (int t = 0; t < steps; ++t) {
    const Tensor2 input = gather_augmented(env);
    const Tensor2 q = mlp_forward(qnet, input);
    for (int i = 0; i < env.num_houses(); ++i) {
      actions[static_cast<size_t>(i)] = q(i, 1) > q(i, 0) ? 1 : 0;
    }
    const StepResult r = env.step(actions);
    if (t >= warmup) {
      const double e = (r.consumption_w - r.signal_w) / env.num_houses();
      sig_sq += e * e;
      ++sig_n;
      for (int i = 0; i < env.num_houses(); ++i) {
        const double d = env.house(i).air_temp - cfg.target_temp_c;
        temp_sq += d * d;
        ++temp_n;
      }
    }
  }
  QuickRmse out;
  out.signal = sig_n ? std::sqrt(sig_sq / sig_n) : 0.0;
  out.temp = temp_n ? std::sqrt(temp_sq / temp_n) : 0.0;
  return out;
}

}  // namespace

PolicyCheckpoint dqn_train(const EnvConfig& env_config, const DqnConfig& config,
                           const std::string& log_path) {
  env_config.validate();
  if (config.minibatch < 1 || config.episodes < 1 || config.steps_per_episode < 1) {
    throw ConfigError("dqn: bad training sizes");
  }

  EnvConfig probe_cfg = env_config;
  Environment probe(probe_cfg);
  const int n = probe.num_houses();
  const int obs_dim = probe.augmented_size();

  Mlp qnet = Mlp::make({obs_dim, config.hidden, config.hidden, 2},
                       {Activation::relu, Activation::relu, Activation::linear},
                       mix_seed(config.seed, 0xD0));
  Mlp target_net = qnet;
  AdamState adam(qnet, AdamConfig{config.lr, 0.9, 0.999, 1e-8});
  ReplayBuffer buffer(config.buffer_capacity, obs_dim);

  Rng explore_rng(mix_seed(config.seed, 0xD1));
  Rng sample_rng(mix_seed(config.seed, 0xD2));

  std::ofstream log;
  if (!log_path.empty()) log.open(log_path, std::ios::trunc);

  std::vector<uint8_t> actions(static_cast<size_t>(n));
  std::vector<uint32_t> batch_idx;
  int64_t global_steps = 0;
  double last_loss = 0.0;

  for (int episode = 0; episode < config.episodes; ++episode) {
    const double epsilon = std::max(
        config.epsilon_min,
        config.epsilon0 * std::pow(config.epsilon_decay, static_cast<double>(episode)));

    EnvConfig cfg = env_config;
    cfg.seed = mix_seed(env_config.seed, 0xE000 + static_cast<uint64_t>(episode));
    Environment env(cfg);

    Tensor2 obs_now = gather_augmented(env);
    double episode_return = 0.0;

    for (int t = 0; t < config.steps_per_episode; ++t) {
      const Tensor2 q = mlp_forward(qnet, obs_now);
      for (int i = 0; i < n; ++i) {
        if (explore_rng.uniform() < epsilon) {
          actions[static_cast<size_t>(i)] = static_cast<uint8_t>(explore_rng.below(2));
        } else {
          actions[static_cast<size_t>(i)] = q(i, 1) > q(i, 0) ? 1 : 0;
        }
      }
      const StepResult result = env.step(actions);
      Tensor2 obs_next = gather_augmented(env);
      for (int i = 0; i < n; ++i) {
        buffer.push(obs_now.row(i), actions[static_cast<size_t>(i)],
                    result.rewards[static_cast<size_t>(i)], obs_next.row(i));
        episode_return += result.rewards[static_cast<size_t>(i)];
      }
      obs_now = std::move(obs_next);
      ++global_steps;

      if (buffer.size() < static_cast<size_t>(config.learn_start)) continue;

      // One minibatch update per environment step.
      buffer.sample_indices(config.minibatch, sample_rng, batch_idx);
      const int b = static_cast<int>(batch_idx.size());
      Tensor2 batch_obs(b, obs_dim), batch_next(b, obs_dim);
      for (int r = 0; r < b; ++r) {
        const auto s = buffer.at(batch_idx[static_cast<size_t>(r)]);
        std::copy(s.obs, s.obs + obs_dim, batch_obs.row(r));
        std::copy(s.next_obs, s.next_obs + obs_dim, batch_next.row(r));
      }
      const Mlp& bootstrap =
          config.target_update_period > 0 ? target_net : qnet;
      const Tensor2 q_next = mlp_forward(bootstrap, batch_next);

      ForwardCache cache;
      const Tensor2 q_pred = mlp_forward(qnet, batch_obs, &cache);
      Tensor2 dq(b, 2);
      double loss = 0.0;
      for (int r = 0; r < b; ++r) {
        const auto s = buffer.at(batch_idx[static_cast<size_t>(r)]);
        const double target = dqn_target(
            s.reward, config.gamma, std::max(q_next(r, 0), q_next(r, 1)));
        double dx = 0.0;
        loss += huber(q_pred(r, s.action) - target, config.huber_delta, &dx);
        dq(r, s.action) = dx / b;
      }
      loss /= b;
      last_loss = loss;
      if (!std::isfinite(loss) || loss > config.divergence_loss) {
        throw DivergenceDetected("dqn: loss " + std::to_string(loss));
      }

      MlpGrads grads = MlpGrads::zeros_like(qnet);
      mlp_backward(qnet, cache, dq, grads);
      adam.step(qnet, grads);

      if (config.target_update_period > 0 &&
          global_steps % config.target_update_period == 0) {
        target_net = qnet;
      }
    }

    if (log.is_open()) {
      log << "{\"episode\":" << episode << ",\"epsilon\":" << epsilon
          << ",\"mean_return\":"
          << episode_return / (static_cast<double>(n) * config.steps_per_episode)
          << ",\"loss\":" << last_loss;
      if (config.log_every > 0 && (episode + 1) % config.log_every == 0) {
        qnet.require_finite("dqn parameters");
        const QuickRmse v =
            validation_rollout(qnet, env_config, mix_seed(config.seed, 0xF1),
                               config.validation_steps, config.validation_warmup);
        log << ",\"val_signal_rmse_w\":" << v.signal
            << ",\"val_temp_rmse_c\":" << v.temp;
      }
      log << "}\n";
    }
  }

  PolicyCheckpoint ck;
  ck.kind = AgentKind::dqn;
  ck.obs_size = Observation::kFields;
  ck.comm_neighbours_tr = env_config.comm_neighbours;
  ck.ring_size_tr = probe.ring_size();
  ck.normalization = probe.normalization();
  ck.nets.emplace("q", std::move(qnet));
  return ck;
}

}  // namespace acfleet
