#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "acfleet/controllers.hpp"

namespace acfleet {

/// Receding-horizon dispatch problem over binary AC plans. The future signal
/// is held constant at its current value; house dynamics enter as exact
/// affine maps extracted from the closed-form thermal step, so a planned
/// trajectory matches the simulator step for step.
struct MpcProblem {
  int horizon = 3;       // steps
  double dt_s = 12.0;
  double signal_w = 0.0;
  double alpha_temp = 1.0;
  double alpha_sig = 3e-7;
  double target_temp = 20.0;

  struct Plant {
    // x' = A x + b_off + a * b_act with x = (air_temp, mass_temp)
    double a11, a12, a21, a22;
    double boff_air, boff_mass;
    double bact_air, bact_mass;
    double air0, mass0;
    double power_w;
    bool on0;
    int lockout_remaining_steps;
    int lockout_total_steps;
  };
  std::vector<Plant> plants;

  static MpcProblem from_env(const Environment& env, int horizon);
  void validate() const;

  int num_vars() const { return horizon * static_cast<int>(plants.size()); }
  /// Plan layout: variable t * N + i is house i's action at plan step t.
  int var(int t, int i) const { return t * static_cast<int>(plants.size()) + i; }
};

/// Objective of a binary plan, evaluated by rolling the plants forward.
/// Defined for infeasible plans too (feasibility is checked separately).
double mpc_objective(const MpcProblem& problem, std::span<const uint8_t> plan);

/// A plan is feasible when every requested ON would actually be honored by
/// the lockout state machine.
bool mpc_feasible(const MpcProblem& problem, std::span<const uint8_t> plan);

struct MpcResult {
  std::vector<uint8_t> plan;           // length num_vars()
  std::vector<uint8_t> first_actions;  // plan at t = 0
  double objective = 0.0;
  uint64_t nodes_explored = 0;
  bool time_budget_hit = false;
};

/// Exact minimum by exhaustive enumeration. Requires num_vars() <= 24.
MpcResult mpc_enumerate(const MpcProblem& problem);

/// Exact minimum (gap 0) by branch and bound. Nodes are bounded through the
/// box relaxation of the convex quadratic objective: projected gradient
/// descent followed by a gradient linearization over the box, which lower
/// bounds every completion. Lockout constraints prune partial plans only when
/// already-certain violations appear. With time_budget_s <= 0 the search is
/// exhaustive and deterministic; otherwise the best incumbent so far is
/// returned with time_budget_hit set once the budget expires.
MpcResult mpc_branch_and_bound(const MpcProblem& problem, double time_budget_s = 0.0);

enum class MpcSolver : uint8_t { enumerate, branch_and_bound };

struct MpcControllerConfig {
  int horizon = 3;
  MpcSolver solver = MpcSolver::branch_and_bound;
  double time_budget_s = 10.0;  // per re-plan; <= 0 disables the budget
};

class MpcController final : public Controller {
 public:
  explicit MpcController(MpcControllerConfig config) : config_(config) {}

  std::string name() const override { return "mpc"; }
  bool decentralized() const override { return false; }
  void select_actions(Environment& env, std::vector<uint8_t>& out) override;

  /// Optional sink receiving every solved plan (for JSONL dumps).
  void set_plan_sink(std::function<void(double time_s, const MpcResult&)> sink) {
    sink_ = std::move(sink);
  }

 private:
  MpcControllerConfig config_;
  std::function<void(double, const MpcResult&)> sink_;
};

}  // namespace acfleet
