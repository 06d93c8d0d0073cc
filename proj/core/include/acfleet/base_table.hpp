#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acfleet/hvac.hpp"
#include "acfleet/thermal.hpp"

namespace acfleet {

/// Grid over which the per-house average cooling demand is precomputed.
/// Continuous axes (outdoor temperature, air/mass temperature gaps to the
/// target) are interpolated multilinearly; the cooling-capacity axis and the
/// thermal-parameter presets use nearest neighbour.
struct BaseTableGridSpec {
  std::vector<double> outdoor_temps;            // deg C, ascending
  std::vector<double> air_gaps;                 // Th - TT, deg C, ascending
  std::vector<double> mass_gaps;                // Tm - TT, deg C, ascending
  std::vector<double> cooling_capacities_w;     // ascending
  std::vector<ThermalParams> thermal_presets;

  double target_temp = 20.0;  // reference target the grid was generated at
  double cop = 2.5;
  double latent_fraction = 0.35;
  double dt_s = 4.0;
  int sim_steps = 75;  // 5 minutes at 4 s

  static BaseTableGridSpec defaults();
  /// A coarse grid for fast tests; same envelope, fewer nodes.
  static BaseTableGridSpec coarse();
  void validate() const;

  size_t node_count() const {
    return thermal_presets.size() * cooling_capacities_w.size() *
           outdoor_temps.size() * air_gaps.size() * mass_gaps.size();
  }
};

/// Average electrical power (W) a thermostat-controlled AC draws over the
/// grid's evaluation window, tabulated per grid node. Thread-safe for
/// concurrent lookups.
class BaseSignalTable {
 public:
  using NodeOracle =
      std::function<double(const BaseTableGridSpec&, size_t preset, double ka_w,
                           double outdoor, double air_gap, double mass_gap)>;

  /// Reference node simulation: thermostat control without lockout from the
  /// node's state, constant outdoor temperature, mean electrical power over
  /// spec.sim_steps steps.
  static double bbc_mean_power(const BaseTableGridSpec& spec, size_t preset,
                               double ka_w, double outdoor, double air_gap,
                               double mass_gap);

  /// Runs the oracle on every node. Deterministic: the same spec yields a
  /// bit-identical table regardless of `jobs`.
  static BaseSignalTable build(const BaseTableGridSpec& spec, int jobs = 1,
                               NodeOracle oracle = {});

  BaseSignalTable(const BaseSignalTable&) = delete;
  BaseSignalTable& operator=(const BaseSignalTable&) = delete;
  BaseSignalTable(BaseSignalTable&& other) noexcept;

  /// Per-house demand estimate in W. Continuous axes clamp to the hull
  /// (counted, see clamp_count); target temperatures other than the grid's
  /// reference are handled by translating the outdoor axis, which is exact
  /// for the affine house model.
  double lookup(double air_temp, double mass_temp, double outdoor_temp,
                double target_temp, const ThermalParams& params,
                double cooling_capacity_w) const;

  const BaseTableGridSpec& spec() const { return spec_; }
  double value_at(size_t preset, size_t ka, size_t to, size_t air, size_t mass) const;
  const std::vector<double>& values() const { return values_; }
  uint64_t clamp_count() const { return clamps_.load(std::memory_order_relaxed); }

  size_t nearest_preset(const ThermalParams& params) const;
  size_t nearest_capacity(double cooling_capacity_w) const;

  struct Validation {
    double max_residual_w = 0.0;     // worst |interpolated - fresh sim|
    double threshold_w = 0.0;        // 10% of the smallest rated draw
    bool grid_too_coarse = false;    // any residual above threshold
    double monotone_fraction = 1.0;  // outdoor-axis lines that are non-decreasing
  };
  Validation validate(int samples, uint64_t seed, NodeOracle oracle = {}) const;

  /// Versioned binary blob plus a human-readable `<path>.meta.json` sidecar.
  void save(const std::string& path) const;
  static BaseSignalTable load(const std::string& path);

 private:
  BaseSignalTable() = default;

  size_t index(size_t preset, size_t ka, size_t to, size_t air, size_t mass) const;

  BaseTableGridSpec spec_;
  std::vector<double> values_;
  mutable std::atomic<uint64_t> clamps_{0};
};

}  // namespace acfleet
