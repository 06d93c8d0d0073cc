#include "acfleet/hvac.hpp"

#include <algorithm>
#include <cmath>

#include "acfleet/errors.hpp"

namespace acfleet {

void AcParams::validate(double dt_s) const {
  if (!(cooling_capacity_w > 0.0)) throw ConfigError("AC cooling capacity must be > 0");
  if (!(cop > 0.0)) throw ConfigError("AC COP must be > 0");
  if (latent_fraction < 0.0) throw ConfigError("AC latent fraction must be >= 0");
  if (lockout_s < 0.0) throw ConfigError("AC lockout must be >= 0");
  if (dt_s > 0.0) {
    const double steps = lockout_s / dt_s;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
      throw ConfigError("AC lockout must be a whole number of timesteps");
    }
  }
}

AcOutputs ac_outputs(const AcParams& params, const AcState& state) {
  if (!state.on) return {0.0, 0.0};
  return {params.heat_w(), params.power_w()};
}

AcState apply_action(const AcState& state, const AcParams& params, bool want_on,
                     double dt_s) {
  AcState next;
  if (state.on) {
    if (want_on) return state;  // idempotent
    next.on = false;
    next.lockout_remaining_s = std::max(params.lockout_s - dt_s, 0.0);
    return next;
  }
  // Eligibility is checked before this step's tick: the clock must already
  // read zero for the request to go through.
  if (want_on && state.lockout_remaining_s <= 0.0) {
    next.on = true;
    next.lockout_remaining_s = 0.0;
    return next;
  }
  next.on = false;
  next.lockout_remaining_s = std::max(state.lockout_remaining_s - dt_s, 0.0);
  return next;
}

}  // namespace acfleet
