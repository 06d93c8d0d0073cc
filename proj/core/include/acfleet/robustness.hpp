#pragma once

#include <span>
#include <string>

#include "acfleet/metrics.hpp"

namespace acfleet {

/// Deployment disturbances to sweep. Heterogeneity draws follow the standard
/// catalogue: thermal parameters get 50% truncated-positive Gaussian noise,
/// cooling capacities come from {10, 12.5, 15, 17.5, 20} kW and lockouts
/// from {32, 36, 40, 44, 48} s, all seeded per environment seed.
struct RobustnessSpec {
  std::vector<double> dropout_probs;  // message-loss probabilities to sweep
  bool thermal_heterogeneity = false;
  bool capacity_heterogeneity = false;
  bool lockout_heterogeneity = false;
  bool outdoor_plus_4c = false;
  bool outdoor_minus_4c = false;
  bool signal_plus_30pct = false;
  bool signal_minus_30pct = false;
  bool noise_amplitude_plus_30pct = false;
  bool noise_frequency_plus_100pct = false;
  bool solar_gain_on = false;

  static RobustnessSpec full();
};

/// A midday irradiance bump (about 400 W peak) expressed through the
/// polynomial solar interface; stands in when no site coefficients exist.
SolarConfig demo_solar_gain();

/// Applies one named disturbance to a config.
EnvConfig perturb_config(const EnvConfig& base, const std::string& label);

struct RobustnessRow {
  std::string label;
  MetricsReport report;
};

/// Controllers are rebuilt per disturbance because compatibility and message
/// dropout depend on the perturbed environment.
using EnvControllerFactory =
    std::function<std::unique_ptr<Controller>(const EnvConfig&)>;

std::vector<RobustnessRow> robustness_suite(const EnvControllerFactory& make_controller,
                                            const EnvConfig& base,
                                            const RobustnessSpec& spec,
                                            std::span<const uint64_t> seeds,
                                            const EvaluateOptions& options = {});

}  // namespace acfleet
