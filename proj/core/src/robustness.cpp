#include "acfleet/robustness.hpp"

#include <cmath>

#include "acfleet/errors.hpp"

namespace acfleet {

RobustnessSpec RobustnessSpec::full() {
  RobustnessSpec s;
  s.dropout_probs = {0.1, 0.5};
  s.thermal_heterogeneity = true;
  s.capacity_heterogeneity = true;
  s.lockout_heterogeneity = true;
  s.outdoor_plus_4c = true;
  s.outdoor_minus_4c = true;
  s.signal_plus_30pct = true;
  s.signal_minus_30pct = true;
  s.noise_amplitude_plus_30pct = true;
  s.noise_frequency_plus_100pct = true;
  s.solar_gain_on = true;
  return s;
}

SolarConfig demo_solar_gain() {
  SolarConfig solar;
  solar.enabled = true;
  // Quadratic bump in the time-of-day fraction v, zero at the window edges
  // (7:30 and 17:30), peaking around 400 W at midday.
  const double v0 = 7.5 / 24.0;
  const double v1 = 17.5 / 24.0;
  const double half = 0.5 * (v1 - v0);
  const double peak = 400.0;
  solar.coeffs[0][0] = -peak * v0 * v1 / (half * half);
  solar.coeffs[0][1] = peak * (v0 + v1) / (half * half);
  solar.coeffs[0][2] = -peak / (half * half);
  return solar;
}

EnvConfig perturb_config(const EnvConfig& base, const std::string& label) {
  EnvConfig cfg = base;
  if (label == "baseline") return cfg;
  if (label.rfind("comm_dropout_", 0) == 0) {
    cfg.comm_dropout = std::stod(label.substr(std::string("comm_dropout_").size()));
    return cfg;
  }
  if (label == "thermal_heterogeneity") {
    cfg.heterogeneity.thermal_sigma_frac = 0.5;
    return cfg;
  }
  if (label == "capacity_heterogeneity") {
    cfg.heterogeneity.cooling_choices_w = {10000.0, 12500.0, 15000.0, 17500.0, 20000.0};
    return cfg;
  }
  if (label == "lockout_heterogeneity") {
    cfg.heterogeneity.lockout_choices_s = {32.0, 36.0, 40.0, 44.0, 48.0};
    return cfg;
  }
  if (label == "outdoor_plus_4c") {
    cfg.outdoor.min_c += 4.0;
    cfg.outdoor.max_c += 4.0;
    return cfg;
  }
  if (label == "outdoor_minus_4c") {
    cfg.outdoor.min_c -= 4.0;
    cfg.outdoor.max_c -= 4.0;
    return cfg;
  }
  if (label == "signal_plus_30pct") {
    cfg.base_signal_scale *= 1.3;
    return cfg;
  }
  if (label == "signal_minus_30pct") {
    cfg.base_signal_scale *= 0.7;
    return cfg;
  }
  if (label == "noise_amplitude_plus_30pct") {
    cfg.noise_amplitude *= 1.3;
    return cfg;
  }
  if (label == "noise_frequency_plus_100pct") {
    cfg.noise.base_period_s *= 0.5;
    return cfg;
  }
  if (label == "solar_gain") {
    cfg.solar = cfg.solar.enabled ? cfg.solar : demo_solar_gain();
    cfg.solar.enabled = true;
    return cfg;
  }
  throw ConfigError("unknown robustness disturbance: " + label);
}

std::vector<RobustnessRow> robustness_suite(const EnvControllerFactory& make_controller,
                                            const EnvConfig& base,
                                            const RobustnessSpec& spec,
                                            std::span<const uint64_t> seeds,
                                            const EvaluateOptions& options) {
  std::vector<std::string> labels{"baseline"};
  for (double p : spec.dropout_probs) {
    labels.push_back("comm_dropout_" + std::to_string(p));
  }
  if (spec.thermal_heterogeneity) labels.push_back("thermal_heterogeneity");
  if (spec.capacity_heterogeneity) labels.push_back("capacity_heterogeneity");
  if (spec.lockout_heterogeneity) labels.push_back("lockout_heterogeneity");
  if (spec.outdoor_plus_4c) labels.push_back("outdoor_plus_4c");
  if (spec.outdoor_minus_4c) labels.push_back("outdoor_minus_4c");
  if (spec.signal_plus_30pct) labels.push_back("signal_plus_30pct");
  if (spec.signal_minus_30pct) labels.push_back("signal_minus_30pct");
  if (spec.noise_amplitude_plus_30pct) labels.push_back("noise_amplitude_plus_30pct");
  if (spec.noise_frequency_plus_100pct) labels.push_back("noise_frequency_plus_100pct");
  if (spec.solar_gain_on) labels.push_back("solar_gain");

  std::vector<RobustnessRow> rows;
  for (const std::string& label : labels) {
    const EnvConfig cfg = perturb_config(base, label);
    RobustnessRow row;
    row.label = label;
    row.report =
        evaluate([&] { return make_controller(cfg); }, cfg, seeds, options);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace acfleet
