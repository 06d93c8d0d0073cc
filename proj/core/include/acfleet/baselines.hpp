#pragma once

#include <span>
#include <vector>

#include "acfleet/controllers.hpp"

namespace acfleet {

/// Thermostat rule: ON iff the air temperature strictly exceeds the target.
/// Equality picks OFF. Lockout enforcement is left to the backup controller.
bool bbc_action(const Observation& obs);

/// Per-agent snapshot for the centralized greedy dispatch.
struct GreedyAgentView {
  double air_temp_c;
  double target_temp_c;
  double power_w;    // electrical draw if ON
  bool available;    // not in lockout
};

/// Centralized knapsack-style dispatch: agents that are free to run are
/// ranked by (air - target) / power, highest first (ties: lower index), and
/// switched ON in that order until consumption reaches the signal. Everyone
/// else is OFF.
void greedy_actions(std::span<const GreedyAgentView> agents, double signal_w,
                    std::vector<uint8_t>& out);

class BbcController final : public Controller {
 public:
  std::string name() const override { return "bbc"; }
  bool decentralized() const override { return true; }
  void select_actions(Environment& env, std::vector<uint8_t>& out) override;
};

class GreedyController final : public Controller {
 public:
  std::string name() const override { return "greedy"; }
  bool decentralized() const override { return false; }
  void on_reset(const Environment& env) override;
  void select_actions(Environment& env, std::vector<uint8_t>& out) override;

 private:
  std::vector<GreedyAgentView> scratch_;
};

}  // namespace acfleet
