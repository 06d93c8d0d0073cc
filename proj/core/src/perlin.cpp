#include "acfleet/perlin.hpp"

#include <cmath>

#include "acfleet/errors.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

namespace {

// Quintic smoothstep: zero first and second derivative at the cell edges.
inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// +1 or -1, decided by a stateless hash of (cell, octave, seed). Hash-based
// gradients avoid the 256-entry permutation table's short repeat period.
inline double gradient(int64_t cell, int octave, uint64_t seed) {
  uint64_t h = splitmix64(static_cast<uint64_t>(cell) ^
                          splitmix64(seed + 0x51ed270b * static_cast<uint64_t>(octave + 1)));
  return (h & 1) ? 1.0 : -1.0;
}

// Classic 1-D gradient noise on the unit lattice, scaled to span [-1, 1]
// (the raw construction with unit gradients peaks at 0.5).
inline double gradient_noise(double x, int octave, uint64_t seed) {
  const double fl = std::floor(x);
  const int64_t cell = static_cast<int64_t>(fl);
  const double f = x - fl;
  const double g0 = gradient(cell, octave, seed);
  const double g1 = gradient(cell + 1, octave, seed);
  const double n0 = g0 * f;
  const double n1 = g1 * (f - 1.0);
  const double u = fade(f);
  return 2.0 * (n0 + u * (n1 - n0));
}

}  // namespace

void PerlinConfig::validate() const {
  if (octaves < 1) throw ConfigError("perlin: need at least one octave");
  if (!(amplitude_ratio > 0.0) || amplitude_ratio > 1.0) {
    throw ConfigError("perlin: amplitude ratio must be in (0, 1]");
  }
  if (!(base_period_s > 0.0)) throw ConfigError("perlin: base period must be > 0");
}

double PerlinConfig::octave_period_s(int k) const {
  const double first = base_period_s / 5.0;
  switch (spacing) {
    case OctaveSpacing::dyadic:
      return first / static_cast<double>(int64_t{1} << k);
    case OctaveSpacing::harmonic:
      return first / static_cast<double>(k + 1);
  }
  return first;
}

double perlin_1d(double t_s, const PerlinConfig& config) {
  config.validate();
  double sum = 0.0;
  double amp = 1.0;
  double amp_total = 0.0;
  for (int k = 0; k < config.octaves; ++k) {
    const double x = t_s / config.octave_period_s(k);
    sum += amp * gradient_noise(x, k, config.seed);
    amp_total += amp;
    amp *= config.amplitude_ratio;
  }
  return sum / amp_total;
}

}  // namespace acfleet
