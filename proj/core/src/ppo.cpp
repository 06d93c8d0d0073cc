#include "acfleet/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "acfleet/adam.hpp"
#include "acfleet/deploy.hpp"
#include "acfleet/errors.hpp"
#include "acfleet/ops.hpp"
#include "acfleet/parallel.hpp"

namespace acfleet {

namespace {

constexpr int kGradChunks = 16;  // fixed partition for order-stable reductions

struct EpochMemory {
  int steps = 0;
  int agents = 0;
  int actor_dim = 0;
  int critic_dim = 0;
  std::vector<double> actor_in;    // steps * agents * actor_dim
  std::vector<double> critic_in;   // steps * critic_dim
  std::vector<uint8_t> actions;    // steps * agents
  std::vector<double> old_probs;   // steps * agents
  std::vector<double> returns;     // steps * agents
  std::vector<double> advantages;  // steps * agents
  std::vector<int32_t> usable;     // step indices whose returns are unbiased

  const double* actor_row(int step, int agent) const {
    return actor_in.data() +
           (static_cast<size_t>(step) * agents + agent) * static_cast<size_t>(actor_dim);
  }
  const double* critic_row(int step) const {
    return critic_in.data() + static_cast<size_t>(step) * static_cast<size_t>(critic_dim);
  }
};

struct PolicyNets {
  CommMode mode;
  // Feed-forward actor (he/nc); unused in tarmac mode.
  Mlp actor;
  // Attention actor (tarmac mode).
  TarmacActor tarmac;
  Mlp critic;

  Tensor2 step_probs(const Tensor2& actor_input, const Tensor2& mask) const {
    if (mode == CommMode::tarmac) {
      return tarmac_forward(tarmac, actor_input, mask);
    }
    return softmax_rows(mlp_forward(actor, actor_input));
  }

  double actor_checksum() const {
    return mode == CommMode::tarmac ? tarmac.parameter_checksum()
                                    : actor.parameter_checksum();
  }

  void require_finite() const {
    if (mode == CommMode::tarmac) {
      tarmac.require_finite("ppo actor parameters");
    } else {
      actor.require_finite("ppo actor parameters");
    }
    critic.require_finite("ppo critic parameters");
  }
};

struct QuickRmse {
  double signal = 0.0;
  double temp = 0.0;
};

QuickRmse validation_rollout(const PolicyNets& nets, const EnvConfig& base,
                             uint64_t seed, int steps, int warmup) {
  EnvConfig cfg = base;
  cfg.seed = seed;
  Environment env(cfg);
  const int n = env.num_houses();
  std::vector<std::vector<int>> neighbours;
  for (int i = 0; i < n; ++i) neighbours.push_back(env.neighbours(i));

  std::vector<uint8_t> actions(static_cast<size_t>(n));
  double sig_sq = 0.0, temp_sq = 0.0;
  int count = 0;
  for (int t = 0; t < steps; ++t) {
    if (nets.mode == CommMode::tarmac) {
      const Tensor2 obs = gather_observations(env);
      tarmac_act(nets.tarmac, obs, neighbours, 0.0, nullptr, actions);
    } else {
      const Tensor2 input = nets.mode == CommMode::he ? gather_augmented(env)
                                                      : gather_observations(env);
      const Tensor2 logits = mlp_forward(nets.actor, input);
      for (int i = 0; i < n; ++i) {
        actions[static_cast<size_t>(i)] = logits(i, 1) > logits(i, 0) ? 1 : 0;
      }
    }
    const StepResult r = env.step(actions);
    if (t >= warmup) {
      const double e = (r.consumption_w - r.signal_w) / n;
      sig_sq += e * e;
      for (int i = 0; i < n; ++i) {
        const double d = env.house(i).air_temp - cfg.target_temp_c;
        temp_sq += d * d;
      }
      ++count;
    }
  }
  QuickRmse out;
  if (count > 0) {
    out.signal = std::sqrt(sig_sq / count);
    out.temp = std::sqrt(temp_sq / (static_cast<double>(count) * n));
  }
  return out;
}

// Collects one epoch of on-policy experience across one or more episodes.
void collect_epoch(const EnvConfig& env_config, const PpoConfig& config,
                   CommMode mode, const PolicyNets& nets, int epoch, Rng& action_rng,
                   EpochMemory& mem, double* mean_return) {
  const int per_ep = config.steps_per_episode;
  const int total_steps = per_ep * config.episodes_per_epoch;

  double reward_sum = 0.0;
  mem.steps = total_steps;
  mem.actor_in.resize(static_cast<size_t>(total_steps) * mem.agents * mem.actor_dim);
  mem.critic_in.resize(static_cast<size_t>(total_steps) * mem.critic_dim);
  mem.actions.resize(static_cast<size_t>(total_steps) * mem.agents);
  mem.old_probs.resize(static_cast<size_t>(total_steps) * mem.agents);
  mem.returns.resize(static_cast<size_t>(total_steps) * mem.agents);
  mem.advantages.resize(static_cast<size_t>(total_steps) * mem.agents);
  mem.usable.clear();

  std::vector<double> rewards(static_cast<size_t>(total_steps) * mem.agents);
  std::vector<uint8_t> actions(static_cast<size_t>(mem.agents));

  for (int ep = 0; ep < config.episodes_per_epoch; ++ep) {
    EnvConfig cfg = env_config;
    cfg.seed = mix_seed(env_config.seed,
                        0xE000 + static_cast<uint64_t>(epoch) * 131 +
                            static_cast<uint64_t>(ep));
    Environment env(cfg);
    const Tensor2 mask = mode == CommMode::tarmac
                             ? [&] {
                                 std::vector<std::vector<int>> nb;
                                 for (int i = 0; i < mem.agents; ++i) {
                                   nb.push_back(env.neighbours(i));
                                 }
                                 return tarmac_mask(nb, 0.0, nullptr);
                               }()
                             : Tensor2();

    for (int t = 0; t < per_ep; ++t) {
      const int step = ep * per_ep + t;

      // Critic sees every agent's plain observation.
      double* crow = mem.critic_in.data() +
                     static_cast<size_t>(step) * static_cast<size_t>(mem.critic_dim);
      for (int i = 0; i < mem.agents; ++i) {
        env.observation_vector(
            i, {crow + static_cast<size_t>(i) * Observation::kFields,
                Observation::kFields});
      }

      // Actor inputs.
      Tensor2 actor_in(mem.agents, mem.actor_dim);
      if (mode == CommMode::he) {
        for (int i = 0; i < mem.agents; ++i) {
          env.augmented_observation(
              i, {actor_in.row(i), static_cast<size_t>(mem.actor_dim)});
        }
      } else {
        for (int i = 0; i < mem.agents; ++i) {
          env.observation_vector(
              i, {actor_in.row(i), static_cast<size_t>(mem.actor_dim)});
        }
      }
      std::copy(actor_in.data(), actor_in.data() + actor_in.size(),
                mem.actor_in.data() + static_cast<size_t>(step) * mem.agents *
                                          static_cast<size_t>(mem.actor_dim));

      const Tensor2 probs = nets.step_probs(actor_in, mask);
      for (int i = 0; i < mem.agents; ++i) {
        const uint8_t a = action_rng.uniform() < probs(i, 1) ? 1 : 0;
        actions[static_cast<size_t>(i)] = a;
        mem.actions[static_cast<size_t>(step) * mem.agents + i] = a;
        mem.old_probs[static_cast<size_t>(step) * mem.agents + i] = probs(i, a);
      }

      const StepResult result = env.step(actions);
      for (int i = 0; i < mem.agents; ++i) {
        const double r = result.rewards[static_cast<size_t>(i)];
        rewards[static_cast<size_t>(step) * mem.agents + i] = r;
        reward_sum += r;
      }
    }

    // Discounted returns within this episode (no bootstrapping at the cut);
    // samples too close to the cut are excluded from training below.
    for (int i = 0; i < mem.agents; ++i) {
      double g = 0.0;
      for (int t = per_ep - 1; t >= 0; --t) {
        const size_t idx = static_cast<size_t>(ep * per_ep + t) * mem.agents + i;
        g = rewards[idx] + config.gamma * g;
        mem.returns[idx] = g;
      }
    }
    const int cut = std::max(1, per_ep - config.return_truncation_steps);
    for (int t = 0; t < cut; ++t) mem.usable.push_back(ep * per_ep + t);
  }

  if (mean_return) {
    *mean_return = reward_sum / (static_cast<double>(total_steps) * mem.agents);
  }
}

}  // namespace

PolicyCheckpoint ppo_train(const EnvConfig& env_config, const PpoConfig& config,
                           CommMode mode, const std::string& log_path,
                           PpoTrainStats* stats_out) {
  env_config.validate();
  if (config.epochs < 1 || config.steps_per_episode < 1 ||
      config.episodes_per_epoch < 1 || config.minibatch < 1 ||
      config.updates_per_epoch < 1) {
    throw ConfigError("ppo: bad training sizes");
  }

  EnvConfig probe_cfg = env_config;
  Environment probe(probe_cfg);
  const int n = probe.num_houses();

  PolicyNets nets;
  nets.mode = mode;
  EpochMemory mem;
  mem.agents = n;
  mem.critic_dim = n * Observation::kFields;

  if (mode == CommMode::tarmac) {
    TarmacDims dims = config.tarmac;
    dims.obs = Observation::kFields;
    dims.actions = 2;
    nets.tarmac = TarmacActor::make(dims, mix_seed(config.seed, 0xA0));
    mem.actor_dim = Observation::kFields;
  } else {
    mem.actor_dim = mode == CommMode::he ? probe.augmented_size()
                                         : Observation::kFields;
    nets.actor = Mlp::make({mem.actor_dim, config.hidden, config.hidden, 2},
                           {Activation::relu, Activation::relu, Activation::linear},
                           mix_seed(config.seed, 0xA0));
  }
  nets.critic = Mlp::make({mem.critic_dim, config.critic_hidden, config.critic_hidden, n},
                          {Activation::relu, Activation::relu, Activation::linear},
                          mix_seed(config.seed, 0xC0));

  const AdamConfig actor_adam_cfg{config.actor_lr, 0.9, 0.999, 1e-8};
  const AdamConfig critic_adam_cfg{config.critic_lr, 0.9, 0.999, 1e-8};
  AdamState critic_adam(nets.critic, critic_adam_cfg);
  std::vector<AdamState> actor_adams;
  if (mode == CommMode::tarmac) {
    actor_adams.emplace_back(nets.tarmac.obs2hidden, actor_adam_cfg);
    actor_adams.emplace_back(nets.tarmac.hidden2key, actor_adam_cfg);
    actor_adams.emplace_back(nets.tarmac.hidden2value, actor_adam_cfg);
    actor_adams.emplace_back(nets.tarmac.hidden2query, actor_adam_cfg);
    actor_adams.emplace_back(nets.tarmac.post_comm, actor_adam_cfg);
    actor_adams.emplace_back(nets.tarmac.actor, actor_adam_cfg);
  } else {
    actor_adams.emplace_back(nets.actor, actor_adam_cfg);
  }

  Rng action_rng(mix_seed(config.seed, 0xA1));
  Rng shuffle_rng(mix_seed(config.seed, 0xA2));
  std::ofstream log;
  if (!log_path.empty()) log.open(log_path, std::ios::trunc);

  PpoTrainStats stats;
  const int tarmac_mb_steps = std::max(1, config.minibatch / n);
  const Tensor2 training_mask = [&] {
    std::vector<std::vector<int>> nb;
    for (int i = 0; i < n; ++i) nb.push_back(probe.neighbours(i));
    return tarmac_mask(nb, 0.0, nullptr);
  }();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double mean_return = 0.0;
    collect_epoch(env_config, config, mode, nets, epoch, action_rng, mem, &mean_return);

    // Values and advantages, computed once with the pre-update critic.
    parallel_chunks(static_cast<size_t>(mem.steps), kGradChunks, config.jobs,
                    [&](int, size_t b, size_t e) {
                      const int rows = static_cast<int>(e - b);
                      Tensor2 in(rows, mem.critic_dim);
                      for (int r = 0; r < rows; ++r) {
                        std::copy(mem.critic_row(static_cast<int>(b) + r),
                                  mem.critic_row(static_cast<int>(b) + r) + mem.critic_dim,
                                  in.row(r));
                      }
                      const Tensor2 v = mlp_forward(nets.critic, in);
                      for (int r = 0; r < rows; ++r) {
                        for (int i = 0; i < n; ++i) {
                          const size_t idx = (b + static_cast<size_t>(r)) * n +
                                             static_cast<size_t>(i);
                          mem.advantages[idx] = mem.returns[idx] - v(r, i);
                        }
                      }
                    });

    // Flattened (step, agent) sample slots from unbiased steps.
    std::vector<int64_t> samples;
    samples.reserve(mem.usable.size() * static_cast<size_t>(n));
    for (int32_t s : mem.usable) {
      for (int i = 0; i < n; ++i) samples.push_back(static_cast<int64_t>(s) * n + i);
    }
    std::vector<int32_t> critic_steps(mem.usable);

    double actor_loss_acc = 0.0, critic_loss_acc = 0.0;
    int64_t actor_loss_n = 0, critic_loss_n = 0;

    for (int pass = 0; pass < config.updates_per_epoch; ++pass) {
      shuffle_rng.shuffle(samples.data(), samples.size());
      shuffle_rng.shuffle(critic_steps.data(), critic_steps.size());

      // ---- actor minibatches ----
      const size_t mb_sz = mode == CommMode::tarmac
                               ? static_cast<size_t>(tarmac_mb_steps)
                               : static_cast<size_t>(config.minibatch);
      const size_t units = mode == CommMode::tarmac ? critic_steps.size() : samples.size();
      // tarmac minibatches are whole steps (communication couples the agents
      // of one step); feed-forward minibatches are individual samples.
      std::vector<int64_t> tarmac_steps;
      if (mode == CommMode::tarmac) {
        tarmac_steps.assign(critic_steps.begin(), critic_steps.end());
        shuffle_rng.shuffle(tarmac_steps.data(), tarmac_steps.size());
      }

      for (size_t start = 0; start < units; start += mb_sz) {
        const size_t end = std::min(units, start + mb_sz);
        const bool first_minibatch = pass == 0 && start == 0;

        if (mode == CommMode::tarmac) {
          TarmacGrads total = TarmacGrads::zeros_like(nets.tarmac);
          std::vector<TarmacGrads> chunk_grads(kGradChunks,
                                               TarmacGrads::zeros_like(nets.tarmac));
          std::vector<double> chunk_loss(kGradChunks, 0.0);
          std::vector<double> chunk_dev(kGradChunks, 0.0);
          const int64_t batch_samples = static_cast<int64_t>(end - start) * n;

          parallel_chunks(end - start, kGradChunks, config.jobs,
                          [&](int c, size_t cb, size_t ce) {
            for (size_t k = cb; k < ce; ++k) {
              const int step = static_cast<int>(tarmac_steps[start + k]);
              Tensor2 obs(n, mem.actor_dim);
              for (int i = 0; i < n; ++i) {
                std::copy(mem.actor_row(step, i), mem.actor_row(step, i) + mem.actor_dim,
                          obs.row(i));
              }
              TarmacCache cache;
              const Tensor2 probs = tarmac_forward(nets.tarmac, obs, training_mask, &cache);
              Tensor2 dprobs(n, 2);
              for (int i = 0; i < n; ++i) {
                const size_t idx = static_cast<size_t>(step) * n + static_cast<size_t>(i);
                const uint8_t a = mem.actions[idx];
                double dp = 0.0;
                chunk_loss[static_cast<size_t>(c)] += clipped_surrogate(
                    probs(i, a), mem.old_probs[idx], mem.advantages[idx], config.clip, &dp);
                dprobs(i, a) = dp / static_cast<double>(batch_samples);
                if (first_minibatch) {
                  chunk_dev[static_cast<size_t>(c)] =
                      std::max(chunk_dev[static_cast<size_t>(c)],
                               std::abs(probs(i, a) / mem.old_probs[idx] - 1.0));
                }
              }
              tarmac_backward(nets.tarmac, cache, training_mask, dprobs,
                              chunk_grads[static_cast<size_t>(c)]);
            }
          });
          for (int c = 0; c < kGradChunks; ++c) {
            total.add(chunk_grads[static_cast<size_t>(c)]);
            actor_loss_acc += chunk_loss[static_cast<size_t>(c)];
            if (first_minibatch) {
              stats.max_first_ratio_dev =
                  std::max(stats.max_first_ratio_dev, chunk_dev[static_cast<size_t>(c)]);
            }
          }
          actor_loss_n += batch_samples;
          const double batch_loss =
              actor_loss_acc / std::max<int64_t>(actor_loss_n, 1);
          if (!std::isfinite(batch_loss) ||
              std::abs(batch_loss) > config.divergence_loss) {
            throw DivergenceDetected("ppo: actor loss diverged");
          }
          clip_global_norm(total.all(), config.max_grad_norm);
          actor_adams[0].step(nets.tarmac.obs2hidden, total.obs2hidden);
          actor_adams[1].step(nets.tarmac.hidden2key, total.hidden2key);
          actor_adams[2].step(nets.tarmac.hidden2value, total.hidden2value);
          actor_adams[3].step(nets.tarmac.hidden2query, total.hidden2query);
          actor_adams[4].step(nets.tarmac.post_comm, total.post_comm);
          actor_adams[5].step(nets.tarmac.actor, total.actor);
        } else {
          MlpGrads total = MlpGrads::zeros_like(nets.actor);
          std::vector<MlpGrads> chunk_grads(kGradChunks, MlpGrads::zeros_like(nets.actor));
          std::vector<double> chunk_loss(kGradChunks, 0.0);
          std::vector<double> chunk_dev(kGradChunks, 0.0);
          const int64_t batch_samples = static_cast<int64_t>(end - start);

          parallel_chunks(end - start, kGradChunks, config.jobs,
                          [&](int c, size_t cb, size_t ce) {
            const int rows = static_cast<int>(ce - cb);
            if (rows == 0) return;
            Tensor2 in(rows, mem.actor_dim);
            std::vector<int64_t> slot(static_cast<size_t>(rows));
            for (int r = 0; r < rows; ++r) {
              slot[static_cast<size_t>(r)] = samples[start + cb + static_cast<size_t>(r)];
              const int step = static_cast<int>(slot[static_cast<size_t>(r)] / n);
              const int agent = static_cast<int>(slot[static_cast<size_t>(r)] % n);
              std::copy(mem.actor_row(step, agent),
                        mem.actor_row(step, agent) + mem.actor_dim, in.row(r));
            }
            ForwardCache cache;
            const Tensor2 probs = softmax_rows(mlp_forward(nets.actor, in, &cache));
            Tensor2 dprobs(rows, 2);
            for (int r = 0; r < rows; ++r) {
              const size_t idx = static_cast<size_t>(slot[static_cast<size_t>(r)]);
              const uint8_t a = mem.actions[idx];
              double dp = 0.0;
              chunk_loss[static_cast<size_t>(c)] += clipped_surrogate(
                  probs(r, a), mem.old_probs[idx], mem.advantages[idx], config.clip, &dp);
              dprobs(r, a) = dp / static_cast<double>(batch_samples);
              if (first_minibatch) {
                chunk_dev[static_cast<size_t>(c)] =
                    std::max(chunk_dev[static_cast<size_t>(c)],
                             std::abs(probs(r, a) / mem.old_probs[idx] - 1.0));
              }
            }
            const Tensor2 dlogits = softmax_backward_rows(probs, dprobs);
            mlp_backward(nets.actor, cache, dlogits, chunk_grads[static_cast<size_t>(c)]);
          });
          for (int c = 0; c < kGradChunks; ++c) {
            total.add(chunk_grads[static_cast<size_t>(c)]);
            actor_loss_acc += chunk_loss[static_cast<size_t>(c)];
            if (first_minibatch) {
              stats.max_first_ratio_dev =
                  std::max(stats.max_first_ratio_dev, chunk_dev[static_cast<size_t>(c)]);
            }
          }
          actor_loss_n += batch_samples;
          const double batch_loss =
              actor_loss_acc / std::max<int64_t>(actor_loss_n, 1);
          if (!std::isfinite(batch_loss) ||
              std::abs(batch_loss) > config.divergence_loss) {
            throw DivergenceDetected("ppo: actor loss diverged");
          }
          std::vector<MlpGrads*> refs{&total};
          clip_global_norm(refs, config.max_grad_norm);
          actor_adams[0].step(nets.actor, total);
        }
      }

      // ---- critic minibatches over whole steps ----
      const size_t critic_mb = static_cast<size_t>(std::max(1, config.minibatch / n));
      for (size_t start = 0; start < critic_steps.size(); start += critic_mb) {
        const size_t end = std::min(critic_steps.size(), start + critic_mb);
        MlpGrads total = MlpGrads::zeros_like(nets.critic);
        std::vector<MlpGrads> chunk_grads(kGradChunks, MlpGrads::zeros_like(nets.critic));
        std::vector<double> chunk_loss(kGradChunks, 0.0);

        parallel_chunks(end - start, kGradChunks, config.jobs,
                        [&](int c, size_t cb, size_t ce) {
          const int rows = static_cast<int>(ce - cb);
          if (rows == 0) return;
          Tensor2 in(rows, mem.critic_dim);
          Tensor2 target(rows, n);
          for (int r = 0; r < rows; ++r) {
            const int step = critic_steps[start + cb + static_cast<size_t>(r)];
            std::copy(mem.critic_row(step), mem.critic_row(step) + mem.critic_dim,
                      in.row(r));
            for (int i = 0; i < n; ++i) {
              target(r, i) = mem.returns[static_cast<size_t>(step) * n + i];
            }
          }
          ForwardCache cache;
          const Tensor2 pred = mlp_forward(nets.critic, in, &cache);
          Tensor2 dpred(rows, n);
          const double local = mse_loss(pred, target, &dpred);
          // mse_loss averages within the chunk; rescale to the minibatch mean.
          const double w = static_cast<double>(rows) / static_cast<double>(end - start);
          scale_inplace(dpred, w);
          chunk_loss[static_cast<size_t>(c)] = local * w;
          mlp_backward(nets.critic, cache, dpred, chunk_grads[static_cast<size_t>(c)]);
        });
        double batch_loss = 0.0;
        for (int c = 0; c < kGradChunks; ++c) {
          total.add(chunk_grads[static_cast<size_t>(c)]);
          batch_loss += chunk_loss[static_cast<size_t>(c)];
        }
        critic_loss_acc += batch_loss;
        ++critic_loss_n;
        if (!std::isfinite(batch_loss) || batch_loss > config.divergence_loss) {
          throw DivergenceDetected("ppo: critic loss diverged");
        }
        std::vector<MlpGrads*> refs{&total};
        clip_global_norm(refs, config.max_grad_norm);
        critic_adam.step(nets.critic, total);
      }
    }

    nets.require_finite();
    stats.final_actor_loss =
        actor_loss_acc / std::max<int64_t>(actor_loss_n, 1);
    stats.final_critic_loss =
        critic_loss_acc / std::max<int64_t>(critic_loss_n, 1);
    stats.actor_checksum = nets.actor_checksum();

    if (log.is_open()) {
      log << "{\"epoch\":" << epoch << ",\"mean_return\":" << mean_return
          << ",\"actor_loss\":" << stats.final_actor_loss
          << ",\"critic_loss\":" << stats.final_critic_loss
          << ",\"first_ratio_dev\":" << stats.max_first_ratio_dev
          << ",\"actor_checksum\":" << stats.actor_checksum;
      if (config.log_every > 0 && (epoch + 1) % config.log_every == 0) {
        const QuickRmse v = validation_rollout(nets, env_config,
                                               mix_seed(config.seed, 0xF2),
                                               config.validation_steps,
                                               config.validation_warmup);
        log << ",\"val_signal_rmse_w\":" << v.signal
            << ",\"val_temp_rmse_c\":" << v.temp;
      }
      log << "}\n";
    }
  }

  if (stats_out) *stats_out = stats;

  PolicyCheckpoint ck;
  ck.obs_size = Observation::kFields;
  ck.comm_neighbours_tr = env_config.comm_neighbours;
  ck.ring_size_tr = probe.ring_size();
  ck.normalization = probe.normalization();
  if (mode == CommMode::tarmac) {
    ck.kind = AgentKind::tarmac;
    ck.comm_rounds = nets.tarmac.dims.rounds;
    ck.nets.emplace("obs2hidden", std::move(nets.tarmac.obs2hidden));
    ck.nets.emplace("hidden2key", std::move(nets.tarmac.hidden2key));
    ck.nets.emplace("hidden2value", std::move(nets.tarmac.hidden2value));
    ck.nets.emplace("hidden2query", std::move(nets.tarmac.hidden2query));
    ck.nets.emplace("post_comm", std::move(nets.tarmac.post_comm));
    ck.nets.emplace("actor", std::move(nets.tarmac.actor));
  } else {
    ck.kind = mode == CommMode::he ? AgentKind::ppo_he : AgentKind::ppo_nc;
    ck.nets.emplace("actor", std::move(nets.actor));
  }
  ck.nets.emplace("critic", std::move(nets.critic));
  return ck;
}

}  // namespace acfleet
