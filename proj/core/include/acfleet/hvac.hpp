#pragma once

namespace acfleet {

/// Single-stage air conditioner ratings plus the compressor lockout duration.
struct AcParams {
  double cooling_capacity_w = 15000.0;  // K_a
  double cop = 2.5;                     // coefficient of performance
  double latent_fraction = 0.35;        // share of capacity spent on latent load
  double lockout_s = 40.0;              // minimum off-time after shutdown

  static AcParams defaults() { return AcParams{}; }

  /// Throws ConfigError on invalid ratings. When dt_s > 0 is given, also
  /// requires lockout_s to be a whole number of timesteps.
  void validate(double dt_s = 0.0) const;

  double power_w() const { return cooling_capacity_w / cop; }
  double heat_w() const { return -cooling_capacity_w / (1.0 + latent_fraction); }
};

struct AcState {
  bool on = false;
  double lockout_remaining_s = 0.0;  // > 0 implies off
};

struct AcOutputs {
  double heat_w = 0.0;   // into the air; negative while cooling
  double power_w = 0.0;  // electrical draw
};

/// Sensible heat flow and electrical power for the current status.
AcOutputs ac_outputs(const AcParams& params, const AcState& state);

/// One lockout-clock tick plus the requested status change.
///
/// Semantics, frozen and tested:
///  - an ON->OFF transition arms the lockout at lockout_s and the clock ticks
///    down by dt in that same step, so the unit spends exactly
///    lockout_s / dt full steps off before an ON request can succeed again;
///  - an ON request is accepted only when the clock already reads zero when
///    the request arrives (the backup controller silently ignores it
///    otherwise, though callers may still record the attempted action);
///  - staying ON or staying OFF is idempotent apart from the clock tick.
AcState apply_action(const AcState& state, const AcParams& params, bool want_on,
                     double dt_s);

}  // namespace acfleet
