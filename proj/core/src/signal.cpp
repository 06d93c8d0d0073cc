#include "acfleet/signal.hpp"

#include <algorithm>

#include "acfleet/errors.hpp"

namespace acfleet {

RegulationSignal signal_at(double t_s, double base_w, const PerlinConfig& noise,
                           double beta) {
  if (base_w < 0.0) throw ConfigError("signal: base demand must be >= 0");
  RegulationSignal s;
  s.base_w = base_w;
  s.deviation_w = base_w * beta * perlin_1d(t_s, noise);
  s.total_w = std::max(0.0, s.base_w + s.deviation_w);
  return s;
}

}  // namespace acfleet
