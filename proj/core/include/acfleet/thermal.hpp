#pragma once

#include <array>

namespace acfleet {

/// Lumped two-node (air + interior mass) house envelope parameters.
/// All temperatures in this model are degrees Celsius. The dynamics are
/// affine, so no Kelvin conversion is needed anywhere.
struct ThermalParams {
  double wall_conductance = 2.18e2;   // air <-> outdoors, W/K
  double mass_capacity = 3.45e6;      // interior mass, J/K
  double air_capacity = 9.08e5;       // indoor air, J/K
  double mass_conductance = 2.84e3;   // air <-> mass surface, W/K

  static ThermalParams defaults() { return ThermalParams{}; }

  /// Throws ConfigError unless all four parameters are strictly positive and
  /// the characteristic quadratic has two distinct real roots.
  void validate() const;

  bool operator==(const ThermalParams&) const = default;
};

struct HouseState {
  double air_temp = 20.0;   // deg C
  double mass_temp = 20.0;  // deg C
};

struct ThermalInputs {
  double outdoor_temp = 30.0;  // deg C
  double hvac_heat_w = 0.0;    // heat flow into the air; <= 0 while cooling
  double solar_gain_w = 0.0;   // >= 0
  double dt_s = 4.0;           // > 0
};

/// Exponentials and constants of the closed-form step. They depend only on
/// (params, dt), so homogeneous fleets derive them once and reuse them.
/// Results are bit-identical to the uncached step_thermal overload.
struct ThermalCoefficients {
  double r1 = 0.0, r2 = 0.0;        // characteristic roots, 1/s (both < 0)
  double exp_r1_dt = 0.0, exp_r2_dt = 0.0;
  double a3 = 0.0, a4 = 0.0;        // mass-mode shape factors
  double dt_s = 0.0;
};

ThermalCoefficients derive_coefficients(const ThermalParams& params, double dt_s);

/// Advances one house by one step of inputs.dt_s with inputs held constant
/// over the step (zero-order hold). Exact flow of the underlying linear
/// system; pure and thread-safe. Throws NonFiniteResult if any intermediate
/// or output value is non-finite.
HouseState step_thermal(const HouseState& state, const ThermalParams& params,
                        const ThermalInputs& inputs);
HouseState step_thermal(const HouseState& state, const ThermalParams& params,
                        const ThermalInputs& inputs,
                        const ThermalCoefficients& coeff);

/// Optional irradiance model. Disabled (0 W) by default; when enabled, the
/// gain is a bivariate polynomial in normalized day-of-year and time-of-day,
/// gated to the 7:30-17:30 window and clamped at 0 W.
struct SolarConfig {
  static constexpr int kPolyDegree = 4;

  bool enabled = false;
  /// coeffs[i][j] multiplies u^i * v^j with u = day_of_year / 365 and
  /// v = seconds_of_day / 86400.
  std::array<std::array<double, kPolyDegree + 1>, kPolyDegree + 1> coeffs{};
  double window_start_s = 7.5 * 3600.0;
  double window_end_s = 17.5 * 3600.0;
};

double solar_gain(int day_of_year, double seconds_of_day, const SolarConfig& config);

}  // namespace acfleet
