#pragma once

#include <cstdint>

namespace acfleet {

/// How octave frequencies relate to each other. `dyadic` doubles the
/// frequency per octave (periods 80/40/20/10/5 s with the defaults);
/// `harmonic` scales it linearly with the octave number instead. Both are
/// kept selectable; dyadic is the default.
enum class OctaveSpacing : uint8_t { dyadic, harmonic };

struct PerlinConfig {
  int octaves = 5;
  double amplitude_ratio = 0.9;  // per-octave amplitude multiplier, in (0, 1]
  double base_period_s = 400.0;  // first octave period = base_period_s / 5
  uint64_t seed = 0;
  OctaveSpacing spacing = OctaveSpacing::dyadic;

  void validate() const;  // throws ConfigError
  double octave_period_s(int k) const;
};

/// Smooth gradient noise at time t >= 0 seconds.
///
/// Sum of `octaves` layers of classic 1-D gradient noise with quintic fading
/// and geometric amplitudes, normalized by the amplitude sum so the output is
/// exactly within [-1, 1]. Zero at every lattice point of a single-octave
/// config; deterministic for a fixed (t, config); C1-smooth inside cells.
double perlin_1d(double t_s, const PerlinConfig& config);

}  // namespace acfleet
