#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acfleet/env.hpp"

namespace acfleet {

/// Common action interface for every controller, classical or learned.
/// Decentralized controllers must derive each agent's action from that
/// agent's own observation/messages only; centralized ones may read the
/// whole environment.
class Controller {
 public:
  virtual ~Controller() = default;

  virtual std::string name() const = 0;
  virtual bool decentralized() const = 0;

  /// Called after env reset; controllers may size scratch buffers here.
  virtual void on_reset(const Environment& env) { (void)env; }

  /// Fills one attempted action per agent.
  virtual void select_actions(Environment& env, std::vector<uint8_t>& out) = 0;
};

using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

}  // namespace acfleet
