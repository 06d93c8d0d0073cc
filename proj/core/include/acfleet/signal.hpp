#pragma once

#include "acfleet/perlin.hpp"

namespace acfleet {

/// Target aggregate consumption at one instant: slowly varying base demand
/// plus a bounded high-frequency deviation.
struct RegulationSignal {
  double base_w = 0.0;       // D_a
  double deviation_w = 0.0;  // base_w * beta * noise, noise in [-1, 1]
  double total_w = 0.0;      // max(0, base_w + deviation_w)
};

/// total = base * (1 + beta * perlin(t)) clamped at 0.
RegulationSignal signal_at(double t_s, double base_w, const PerlinConfig& noise,
                           double beta);

}  // namespace acfleet
