#pragma once

#include <map>
#include <string>

#include "acfleet/env.hpp"
#include "acfleet/mlp.hpp"

namespace acfleet {

enum class AgentKind : uint8_t {
  dqn = 0,
  ppo_he = 1,
  ppo_nc = 2,
  tarmac = 3,
};

std::string agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);  // ConfigError on unknown

/// A trained policy plus everything needed to run it: architecture, input
/// normalization, and the communication reach it was trained with. The actor
/// networks are all a deployment needs; critics ride along for resumption.
struct PolicyCheckpoint {
  AgentKind kind = AgentKind::ppo_nc;
  int obs_size = Observation::kFields;
  int comm_neighbours_tr = 0;      // N_c used in training
  int ring_size_tr = 0;            // message slots per agent
  int comm_rounds = 1;             // attention rounds (tarmac only)
  ObsNormalization normalization;
  std::map<std::string, Mlp> nets;

  const Mlp& net(const std::string& name) const;  // ConfigError if missing
  bool has_net(const std::string& name) const { return nets.count(name) != 0; }

  /// Binary blob with a versioned header (architecture descriptor, shapes,
  /// normalization constants) followed by parameter blocks in declaration
  /// order. A `<path>.meta.json` sidecar carries training metadata.
  void save(const std::string& path, const std::string& metadata_json = "") const;
  static PolicyCheckpoint load(const std::string& path);
};

}  // namespace acfleet
