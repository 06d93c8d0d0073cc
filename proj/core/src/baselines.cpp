#include "acfleet/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace acfleet {

bool bbc_action(const Observation& obs) {
  return obs.air_temp_c > obs.target_temp_c;
}

void greedy_actions(std::span<const GreedyAgentView> agents, double signal_w,
                    std::vector<uint8_t>& out) {
  const size_t n = agents.size();
  out.assign(n, 0);
  if (signal_w <= 0.0) return;

  // Indices of available agents ordered by priority; stable sort keeps the
  // lower-index-first tie-break deterministic.
  static thread_local std::vector<uint32_t> order;
  order.clear();
  for (uint32_t i = 0; i < n; ++i) {
    if (agents[i].available) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const double pa = (agents[a].air_temp_c - agents[a].target_temp_c) / agents[a].power_w;
    const double pb = (agents[b].air_temp_c - agents[b].target_temp_c) / agents[b].power_w;
    return pa > pb;
  });

  double consumption = 0.0;
  for (uint32_t i : order) {
    if (consumption >= signal_w) break;
    out[i] = 1;
    consumption += agents[i].power_w;
  }
}

void BbcController::select_actions(Environment& env, std::vector<uint8_t>& out) {
  const int n = env.num_houses();
  out.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = bbc_action(env.observe(i)) ? 1 : 0;
  }
}

void GreedyController::on_reset(const Environment& env) {
  scratch_.resize(static_cast<size_t>(env.num_houses()));
}

void GreedyController::select_actions(Environment& env, std::vector<uint8_t>& out) {
  const int n = env.num_houses();
  scratch_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const size_t s = static_cast<size_t>(i);
    scratch_[s].air_temp_c = env.house(i).air_temp;
    scratch_[s].target_temp_c = env.config().target_temp_c;
    scratch_[s].power_w = env.ac_params(i).power_w();
    scratch_[s].available = env.ac_state(i).lockout_remaining_s <= 0.0;
  }
  greedy_actions(scratch_, env.signal_w(), out);
}

}  // namespace acfleet
