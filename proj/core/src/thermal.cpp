#include "acfleet/thermal.hpp"

#include <cmath>

#include "acfleet/errors.hpp"

namespace acfleet {

namespace {

struct Quadratic {
  double a, b, c;  // a*T'' + b*T' + c*T = d
};

Quadratic characteristic(const ThermalParams& p) {
  const double uh = p.wall_conductance;
  const double cm = p.mass_capacity;
  const double ch = p.air_capacity;
  const double hm = p.mass_conductance;
  return {cm * ch / hm, cm * (uh + hm) / hm + ch, uh};
}

}  // namespace

void ThermalParams::validate() const {
  if (!(wall_conductance > 0.0) || !(mass_capacity > 0.0) ||
      !(air_capacity > 0.0) || !(mass_conductance > 0.0)) {
    throw ConfigError("thermal parameters must be strictly positive");
  }
  const Quadratic q = characteristic(*this);
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  if (!(disc > 0.0) || !std::isfinite(disc)) {
    // Repeated/complex roots never occur for positive parameters; refusing
    // here keeps the step free of the degenerate branch.
    throw ConfigError("thermal parameters yield a degenerate response");
  }
}

ThermalCoefficients derive_coefficients(const ThermalParams& p, double dt_s) {
  if (!(dt_s > 0.0)) throw ConfigError("thermal step requires dt > 0");
  const Quadratic q = characteristic(p);
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  const double root = std::sqrt(disc);

  ThermalCoefficients k;
  k.r1 = (-q.b + root) / (2.0 * q.a);
  k.r2 = (-q.b - root) / (2.0 * q.a);
  k.exp_r1_dt = std::exp(k.r1 * dt_s);
  k.exp_r2_dt = std::exp(k.r2 * dt_s);
  k.a3 = (k.r1 * p.air_capacity + p.wall_conductance + p.mass_conductance) /
         p.mass_conductance;
  k.a4 = (k.r2 * p.air_capacity + p.wall_conductance + p.mass_conductance) /
         p.mass_conductance;
  k.dt_s = dt_s;

  if (!std::isfinite(k.r1) || !std::isfinite(k.r2) ||
      !std::isfinite(k.exp_r1_dt) || !std::isfinite(k.exp_r2_dt) ||
      !std::isfinite(k.a3) || !std::isfinite(k.a4) || k.r1 == k.r2) {
    throw NonFiniteResult("degenerate thermal coefficients");
  }
  return k;
}

HouseState step_thermal(const HouseState& state, const ThermalParams& params,
                        const ThermalInputs& inputs) {
  return step_thermal(state, params, inputs,
                      derive_coefficients(params, inputs.dt_s));
}

HouseState step_thermal(const HouseState& state, const ThermalParams& params,
                        const ThermalInputs& inputs,
                        const ThermalCoefficients& k) {
  const double uh = params.wall_conductance;
  const double ch = params.air_capacity;
  const double hm = params.mass_conductance;

  // Forcing term and its steady state.
  const double d = inputs.hvac_heat_w + inputs.solar_gain_w +
                   uh * inputs.outdoor_temp;
  const double steady = d / uh;

  // Initial air-temperature slope.
  const double slope0 =
      (hm * state.mass_temp - (uh + hm) * state.air_temp +
       uh * inputs.outdoor_temp + inputs.hvac_heat_w + inputs.solar_gain_w) /
      ch;

  const double a1 =
      (k.r2 * state.air_temp - slope0 - k.r2 * steady) / (k.r2 - k.r1);
  const double a2 = state.air_temp - steady - a1;

  HouseState next;
  next.air_temp = a1 * k.exp_r1_dt + a2 * k.exp_r2_dt + steady;
  next.mass_temp = a1 * k.a3 * k.exp_r1_dt + a2 * k.a4 * k.exp_r2_dt + steady;

  if (!std::isfinite(next.air_temp) || !std::isfinite(next.mass_temp)) {
    throw NonFiniteResult("thermal step produced a non-finite temperature");
  }
  return next;
}

double solar_gain(int day_of_year, double seconds_of_day, const SolarConfig& config) {
  if (!config.enabled) return 0.0;
  if (seconds_of_day < config.window_start_s || seconds_of_day > config.window_end_s) {
    return 0.0;
  }
  const double u = static_cast<double>(day_of_year) / 365.0;
  const double v = seconds_of_day / 86400.0;

  double gain = 0.0;
  double ui = 1.0;
  for (int i = 0; i <= SolarConfig::kPolyDegree; ++i) {
    double vj = 1.0;
    for (int j = 0; j <= SolarConfig::kPolyDegree; ++j) {
      gain += config.coeffs[static_cast<size_t>(i)][static_cast<size_t>(j)] * ui * vj;
      vj *= v;
    }
    ui *= u;
  }
  return gain > 0.0 ? gain : 0.0;
}

}  // namespace acfleet
