#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "acfleet/base_table.hpp"
#include "acfleet/hvac.hpp"
#include "acfleet/perlin.hpp"
#include "acfleet/rng.hpp"
#include "acfleet/signal.hpp"
#include "acfleet/thermal.hpp"

namespace acfleet {

/// One-day sinusoidal outdoor temperature, identical for every house.
/// The minimum is reached at `min_hour`, the maximum 12 hours later;
/// simulated time 0 is midnight.
struct OutdoorProfile {
  double min_c = 28.0;
  double max_c = 34.0;
  double min_hour = 6.0;

  double at(double sim_time_s) const;
};

/// Optional per-house parameter dispersion, sampled once per reset from the
/// environment seed. Empty choice lists / zero sigma mean "homogeneous".
struct HeterogeneityConfig {
  double thermal_sigma_frac = 0.0;          // Gaussian sigma as a fraction of
                                            // each thermal parameter; samples
                                            // are redrawn until positive
  std::vector<double> cooling_choices_w;    // uniform pick per house
  std::vector<double> lockout_choices_s;    // uniform pick per house

  bool homogeneous() const {
    return thermal_sigma_frac == 0.0 && cooling_choices_w.empty() &&
           lockout_choices_s.empty();
  }
};

struct EnvConfig {
  int houses = 10;
  double dt_s = 4.0;
  double target_temp_c = 20.0;
  OutdoorProfile outdoor;
  double alpha_temp = 1.0;
  double alpha_sig = 3e-7;
  int comm_neighbours = 9;      // ring reach parameter N_c (see neighbour_offsets)
  double comm_dropout = 0.0;    // probability a neighbour message is zeroed
  double init_temp_sigma_c = 5.0;
  ThermalParams thermal = ThermalParams::defaults();
  AcParams ac = AcParams::defaults();
  SolarConfig solar;
  int start_day_of_year = 180;
  PerlinConfig noise;           // seed is derived from `seed` at construction
  double noise_amplitude = 0.9; // beta
  double base_signal_scale = 1.0;
  HeterogeneityConfig heterogeneity;
  uint64_t seed = 1;

  /// Base-demand table; when null the environment builds the default one
  /// lazily (shared process-wide).
  std::shared_ptr<const BaseSignalTable> base_table;

  void validate() const;  // throws ConfigError
};

/// Local view handed to each agent: exactly these seven fields, in this order.
struct Observation {
  double air_temp_c;
  double mass_temp_c;
  double target_temp_c;
  bool ac_on;
  double lockout_remaining_s;
  double signal_per_agent_w;
  double consumption_per_agent_w;

  static constexpr int kFields = 7;
};

/// Fixed-slot neighbour message: temperature excess, lockout clock, status.
struct HeMessage {
  double temp_diff_c;
  double lockout_remaining_s;
  bool ac_on;

  static constexpr int kFields = 3;
};

/// Everything a centralized controller may read.
struct GlobalStateView {
  double time_s;
  double signal_w;
  double consumption_w;
  double outdoor_temp_c;
  std::span<const HouseState> houses;
  std::span<const AcState> acs;
};

struct StepResult {
  std::vector<double> rewards;
  double consumption_w = 0.0;      // after this step's actions
  double signal_w = 0.0;           // the target those actions were tracking
  double next_signal_w = 0.0;      // target entering the next step
  bool diverged = false;
};

/// Agents j reachable from i on a ring of N agents: offsets
/// -floor(Nc/2)..+floor(Nc/2) excluding self, wrapped modulo N and ordered by
/// signed offset. Note an odd Nc spans the same ring as Nc-1.
std::vector<int> neighbour_offsets(int agent, int houses, int comm_neighbours);

/// Observation scaling shared by every learned controller. Temperatures are
/// divided by 30, lockout clocks by the lockout duration, and per-agent
/// powers by the rated electrical draw.
struct ObsNormalization {
  double temp_div = 30.0;
  double lockout_div = 40.0;
  double power_div = 6000.0;
};

class Environment {
 public:
  explicit Environment(EnvConfig config);

  void reset();
  /// Reset with explicit initial temperatures (testing/extension hook).
  void reset_with_temps(std::span<const double> air, std::span<const double> mass);

  /// Advances one timestep given one attempted action per agent. Lockout can
  /// override an ON request; the attempted action is what callers should
  /// record for learning.
  StepResult step(std::span<const uint8_t> want_on);

  int num_houses() const { return config_.houses; }
  double dt_s() const { return config_.dt_s; }
  double time_s() const { return time_s_; }
  double signal_w() const { return signal_.total_w; }
  double base_signal_w() const { return signal_.base_w; }
  double consumption_w() const { return consumption_w_; }
  double outdoor_temp_c() const { return config_.outdoor.at(time_s_); }
  double current_solar_gain_w() const;
  bool diverged() const { return diverged_; }

  const EnvConfig& config() const { return config_; }
  const HouseState& house(int i) const { return houses_[static_cast<size_t>(i)]; }
  const AcState& ac_state(int i) const { return acs_[static_cast<size_t>(i)]; }
  const ThermalParams& thermal_params(int i) const {
    return thermal_[static_cast<size_t>(i)];
  }
  const AcParams& ac_params(int i) const { return ac_params_[static_cast<size_t>(i)]; }
  GlobalStateView global_state() const;

  Observation observe(int i) const;
  HeMessage message_from(int j) const;
  const std::vector<int>& neighbours(int i) const {
    return neighbours_[static_cast<size_t>(i)];
  }
  /// Message slots per agent (2 * floor(Nc/2)).
  int ring_size() const { return ring_size_; }

  const ObsNormalization& normalization() const { return norm_; }
  /// Normalized own observation; out must hold Observation::kFields values.
  void observation_vector(int i, std::span<double> out) const;
  /// Normalized observation concatenated with neighbour messages in signed
  /// offset order; dropped messages (comm_dropout) are zero-filled. Out must
  /// hold augmented_size() values.
  void augmented_observation(int i, std::span<double> out);
  int augmented_size() const {
    return Observation::kFields + HeMessage::kFields * ring_size();
  }

 private:
  void refresh_base_demand();
  void finish_reset();

  EnvConfig config_;
  ObsNormalization norm_;
  std::vector<ThermalParams> thermal_;
  std::vector<AcParams> ac_params_;
  std::vector<ThermalCoefficients> coeff_;
  std::vector<HouseState> houses_;
  std::vector<AcState> acs_;
  std::vector<std::vector<int>> neighbours_;
  std::shared_ptr<const BaseSignalTable> table_;
  int ring_size_ = 0;
  int steps_per_refresh_ = 75;
  int64_t step_count_ = 0;
  double time_s_ = 0.0;
  double base_demand_w_ = 0.0;
  RegulationSignal signal_;
  double consumption_w_ = 0.0;
  bool diverged_ = false;
  Rng comm_rng_{0};
};

}  // namespace acfleet
