#include "acfleet/base_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "acfleet/errors.hpp"
#include "acfleet/parallel.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

namespace {

constexpr char kMagic[8] = {'A', 'C', 'F', 'T', 'B', 'L', '0', '1'};
constexpr uint32_t kVersion = 1;

void require_ascending(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw ConfigError(std::string("base table: empty axis ") + name);
  for (size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw ConfigError(std::string("base table: axis not ascending: ") + name);
    }
  }
}

// Bracketing interval and interpolation weight for a (possibly clamped)
// query on a non-uniform ascending axis.
struct AxisPos {
  size_t lo;
  double w;  // weight of axis[lo + 1]
  bool clamped;
};

AxisPos locate(const std::vector<double>& axis, double x) {
  if (axis.size() == 1) return {0, 0.0, false};
  if (x <= axis.front()) return {0, 0.0, x < axis.front()};
  if (x >= axis.back()) return {axis.size() - 2, 1.0, x > axis.back()};
  size_t hi = static_cast<size_t>(
      std::upper_bound(axis.begin(), axis.end(), x) - axis.begin());
  size_t lo = hi - 1;
  return {lo, (x - axis[lo]) / (axis[hi] - axis[lo]), false};
}

}  // namespace

BaseTableGridSpec BaseTableGridSpec::defaults() {
  BaseTableGridSpec s;
  for (int i = 0; i <= 10; ++i) s.outdoor_temps.push_back(26.0 + 1.2 * i);
  s.air_gaps = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  s.mass_gaps = {-2.0, 0.0, 2.0, 5.0, 10.0};
  s.cooling_capacities_w = {10000.0, 12500.0, 15000.0, 17500.0, 20000.0};

  const ThermalParams base = ThermalParams::defaults();
  auto scaled = [&](double fu, double fcm, double fch, double fhm) {
    ThermalParams p = base;
    p.wall_conductance *= fu;
    p.mass_capacity *= fcm;
    p.air_capacity *= fch;
    p.mass_conductance *= fhm;
    return p;
  };
  s.thermal_presets = {
      base,
      scaled(0.55, 0.55, 0.55, 0.55),
      scaled(1.45, 1.45, 1.45, 1.45),
      scaled(1.40, 1.00, 1.00, 1.00),
      scaled(0.60, 1.00, 1.00, 1.00),
      scaled(1.00, 1.50, 1.00, 0.70),
      scaled(1.00, 1.00, 0.65, 1.00),
      scaled(1.00, 0.60, 1.40, 1.00),
  };
  return s;
}

BaseTableGridSpec BaseTableGridSpec::coarse() {
  BaseTableGridSpec s = defaults();
  s.outdoor_temps = {26.0, 30.0, 34.0, 38.0};
  s.air_gaps = {-2.0, -0.5, 0.0, 0.5, 2.0, 10.0};
  s.mass_gaps = {-2.0, 0.0, 10.0};
  s.cooling_capacities_w = {15000.0};
  s.thermal_presets = {ThermalParams::defaults()};
  return s;
}

void BaseTableGridSpec::validate() const {
  require_ascending(outdoor_temps, "outdoor");
  require_ascending(air_gaps, "air gap");
  require_ascending(mass_gaps, "mass gap");
  require_ascending(cooling_capacities_w, "cooling capacity");
  if (thermal_presets.empty()) throw ConfigError("base table: no thermal presets");
  for (const auto& p : thermal_presets) p.validate();
  if (!(cop > 0.0) || latent_fraction < 0.0) throw ConfigError("base table: bad AC ratings");
  if (!(dt_s > 0.0) || sim_steps < 1) throw ConfigError("base table: bad sim settings");
}

double BaseSignalTable::bbc_mean_power(const BaseTableGridSpec& spec, size_t preset,
                                       double ka_w, double outdoor, double air_gap,
                                       double mass_gap) {
  const ThermalParams& params = spec.thermal_presets.at(preset);
  const ThermalCoefficients coeff = derive_coefficients(params, spec.dt_s);
  const double tt = spec.target_temp;
  const double heat_on = -ka_w / (1.0 + spec.latent_fraction);
  const double power_on = ka_w / spec.cop;

  HouseState state{tt + air_gap, tt + mass_gap};
  double energy = 0.0;
  for (int step = 0; step < spec.sim_steps; ++step) {
    const bool on = state.air_temp > tt;
    if (on) energy += power_on;
    ThermalInputs in{outdoor, on ? heat_on : 0.0, 0.0, spec.dt_s};
    state = step_thermal(state, params, in, coeff);
  }
  return energy / spec.sim_steps;
}

BaseSignalTable BaseSignalTable::build(const BaseTableGridSpec& spec, int jobs,
                                       NodeOracle oracle) {
  spec.validate();
  if (!oracle) oracle = &BaseSignalTable::bbc_mean_power;

  BaseSignalTable table;
  table.spec_ = spec;
  table.values_.assign(spec.node_count(), 0.0);

  const size_t nka = spec.cooling_capacities_w.size();
  const size_t nto = spec.outdoor_temps.size();
  const size_t nair = spec.air_gaps.size();
  const size_t nmass = spec.mass_gaps.size();
  const size_t per_preset = nka * nto * nair * nmass;

  parallel_for(table.values_.size(), jobs, [&](size_t idx) {
    size_t rest = idx;
    const size_t preset = rest / per_preset;
    rest %= per_preset;
    const size_t ka = rest / (nto * nair * nmass);
    rest %= nto * nair * nmass;
    const size_t to = rest / (nair * nmass);
    rest %= nair * nmass;
    const size_t air = rest / nmass;
    const size_t mass = rest % nmass;
    table.values_[idx] =
        oracle(spec, preset, spec.cooling_capacities_w[ka], spec.outdoor_temps[to],
               spec.air_gaps[air], spec.mass_gaps[mass]);
  });
  return table;
}

BaseSignalTable::BaseSignalTable(BaseSignalTable&& other) noexcept
    : spec_(std::move(other.spec_)),
      values_(std::move(other.values_)),
      clamps_(other.clamps_.load(std::memory_order_relaxed)) {}

size_t BaseSignalTable::index(size_t preset, size_t ka, size_t to, size_t air,
                              size_t mass) const {
  return (((preset * spec_.cooling_capacities_w.size() + ka) * spec_.outdoor_temps.size() +
           to) * spec_.air_gaps.size() + air) * spec_.mass_gaps.size() + mass;
}

double BaseSignalTable::value_at(size_t preset, size_t ka, size_t to, size_t air,
                                 size_t mass) const {
  return values_.at(index(preset, ka, to, air, mass));
}

size_t BaseSignalTable::nearest_preset(const ThermalParams& params) const {
  const ThermalParams ref = ThermalParams::defaults();
  double best = std::numeric_limits<double>::infinity();
  size_t best_i = 0;
  for (size_t i = 0; i < spec_.thermal_presets.size(); ++i) {
    const ThermalParams& p = spec_.thermal_presets[i];
    const double du = (p.wall_conductance - params.wall_conductance) / ref.wall_conductance;
    const double dcm = (p.mass_capacity - params.mass_capacity) / ref.mass_capacity;
    const double dch = (p.air_capacity - params.air_capacity) / ref.air_capacity;
    const double dhm = (p.mass_conductance - params.mass_conductance) / ref.mass_conductance;
    const double d2 = du * du + dcm * dcm + dch * dch + dhm * dhm;
    if (d2 < best) {
      best = d2;
      best_i = i;
    }
  }
  return best_i;
}

size_t BaseSignalTable::nearest_capacity(double cooling_capacity_w) const {
  double best = std::numeric_limits<double>::infinity();
  size_t best_i = 0;
  for (size_t i = 0; i < spec_.cooling_capacities_w.size(); ++i) {
    const double d = std::abs(spec_.cooling_capacities_w[i] - cooling_capacity_w);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return best_i;
}

double BaseSignalTable::lookup(double air_temp, double mass_temp, double outdoor_temp,
                               double target_temp, const ThermalParams& params,
                               double cooling_capacity_w) const {
  const size_t preset = nearest_preset(params);
  const size_t ka = nearest_capacity(cooling_capacity_w);

  // The model is translation-invariant, so a non-reference target temperature
  // maps exactly onto an outdoor-axis shift.
  const double outdoor_eff = outdoor_temp - target_temp + spec_.target_temp;
  const AxisPos pto = locate(spec_.outdoor_temps, outdoor_eff);
  const AxisPos pair = locate(spec_.air_gaps, air_temp - target_temp);
  const AxisPos pmass = locate(spec_.mass_gaps, mass_temp - target_temp);
  if (pto.clamped || pair.clamped || pmass.clamped) {
    clamps_.fetch_add(1, std::memory_order_relaxed);
  }

  const bool one_to = spec_.outdoor_temps.size() == 1;
  const bool one_air = spec_.air_gaps.size() == 1;
  const bool one_mass = spec_.mass_gaps.size() == 1;

  double acc = 0.0;
  for (int bto = 0; bto < (one_to ? 1 : 2); ++bto) {
    const double wto = one_to ? 1.0 : (bto ? pto.w : 1.0 - pto.w);
    if (wto == 0.0) continue;
    for (int bair = 0; bair < (one_air ? 1 : 2); ++bair) {
      const double wair = one_air ? 1.0 : (bair ? pair.w : 1.0 - pair.w);
      if (wair == 0.0) continue;
      for (int bmass = 0; bmass < (one_mass ? 1 : 2); ++bmass) {
        const double wmass = one_mass ? 1.0 : (bmass ? pmass.w : 1.0 - pmass.w);
        if (wmass == 0.0) continue;
        acc += wto * wair * wmass *
               values_[index(preset, ka, pto.lo + static_cast<size_t>(bto),
                             pair.lo + static_cast<size_t>(bair),
                             pmass.lo + static_cast<size_t>(bmass))];
      }
    }
  }
  return acc;
}

BaseSignalTable::Validation BaseSignalTable::validate(int samples, uint64_t seed,
                                                      NodeOracle oracle) const {
  if (!oracle) oracle = &BaseSignalTable::bbc_mean_power;
  Validation v;

  double min_ka = spec_.cooling_capacities_w.front();
  v.threshold_w = 0.10 * min_ka / spec_.cop;

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const size_t preset = static_cast<size_t>(rng.below(spec_.thermal_presets.size()));
    const size_t ka = static_cast<size_t>(rng.below(spec_.cooling_capacities_w.size()));
    const double to = rng.uniform(spec_.outdoor_temps.front(), spec_.outdoor_temps.back());
    const double air = rng.uniform(spec_.air_gaps.front(), spec_.air_gaps.back());
    const double mass = rng.uniform(spec_.mass_gaps.front(), spec_.mass_gaps.back());

    const double truth =
        oracle(spec_, preset, spec_.cooling_capacities_w[ka], to, air, mass);
    const double interp = lookup(spec_.target_temp + air, spec_.target_temp + mass, to,
                                 spec_.target_temp, spec_.thermal_presets[preset],
                                 spec_.cooling_capacities_w[ka]);
    v.max_residual_w = std::max(v.max_residual_w, std::abs(truth - interp));
  }
  v.grid_too_coarse = v.max_residual_w > v.threshold_w;

  // Demand should rise with outdoor temperature along nearly every grid line.
  size_t lines = 0, ok = 0;
  const size_t nto = spec_.outdoor_temps.size();
  for (size_t preset = 0; preset < spec_.thermal_presets.size(); ++preset) {
    for (size_t ka = 0; ka < spec_.cooling_capacities_w.size(); ++ka) {
      for (size_t air = 0; air < spec_.air_gaps.size(); ++air) {
        for (size_t mass = 0; mass < spec_.mass_gaps.size(); ++mass) {
          ++lines;
          bool mono = true;
          for (size_t to = 1; to < nto && mono; ++to) {
            if (value_at(preset, ka, to, air, mass) <
                value_at(preset, ka, to - 1, air, mass) - 1e-9) {
              mono = false;
            }
          }
          if (mono) ++ok;
        }
      }
    }
  }
  v.monotone_fraction = lines == 0 ? 1.0 : static_cast<double>(ok) / lines;
  return v;
}

namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_axis(std::ostream& out, const std::vector<double>& axis) {
  put<uint32_t>(out, static_cast<uint32_t>(axis.size()));
  for (double v : axis) put(out, v);
}

std::vector<double> get_axis(std::istream& in) {
  const uint32_t n = get<uint32_t>(in);
  std::vector<double> axis(n);
  for (auto& v : axis) v = get<double>(in);
  return axis;
}

}  // namespace

void BaseSignalTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open base table for writing: " + path);

  out.write(kMagic, sizeof(kMagic));
  put<uint32_t>(out, kVersion);
  put_axis(out, spec_.outdoor_temps);
  put_axis(out, spec_.air_gaps);
  put_axis(out, spec_.mass_gaps);
  put_axis(out, spec_.cooling_capacities_w);
  put<uint32_t>(out, static_cast<uint32_t>(spec_.thermal_presets.size()));
  for (const auto& p : spec_.thermal_presets) {
    put(out, p.wall_conductance);
    put(out, p.mass_capacity);
    put(out, p.air_capacity);
    put(out, p.mass_conductance);
  }
  put(out, spec_.target_temp);
  put(out, spec_.cop);
  put(out, spec_.latent_fraction);
  put(out, spec_.dt_s);
  put<int32_t>(out, spec_.sim_steps);
  put<uint64_t>(out, values_.size());
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw ConfigError("short write while saving base table: " + path);

  nlohmann::json meta;
  meta["schema"] = "acfleet.base_table.v1";
  meta["nodes"] = values_.size();
  meta["axes"] = {
      {"outdoor_temps_c", spec_.outdoor_temps},
      {"air_gaps_c", spec_.air_gaps},
      {"mass_gaps_c", spec_.mass_gaps},
      {"cooling_capacities_w", spec_.cooling_capacities_w},
      {"thermal_presets", spec_.thermal_presets.size()},
  };
  meta["target_temp_c"] = spec_.target_temp;
  meta["cop"] = spec_.cop;
  meta["latent_fraction"] = spec_.latent_fraction;
  meta["dt_s"] = spec_.dt_s;
  meta["sim_steps"] = spec_.sim_steps;
  std::ofstream side(path + ".meta.json", std::ios::trunc);
  side << meta.dump(2) << "\n";
}

BaseSignalTable BaseSignalTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open base table: " + path);

  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("not a base table file: " + path);
  }
  if (get<uint32_t>(in) != kVersion) {
    throw ConfigError("unsupported base table version: " + path);
  }

  BaseSignalTable table;
  table.spec_.outdoor_temps = get_axis(in);
  table.spec_.air_gaps = get_axis(in);
  table.spec_.mass_gaps = get_axis(in);
  table.spec_.cooling_capacities_w = get_axis(in);
  const uint32_t npresets = get<uint32_t>(in);
  table.spec_.thermal_presets.resize(npresets);
  for (auto& p : table.spec_.thermal_presets) {
    p.wall_conductance = get<double>(in);
    p.mass_capacity = get<double>(in);
    p.air_capacity = get<double>(in);
    p.mass_conductance = get<double>(in);
  }
  table.spec_.target_temp = get<double>(in);
  table.spec_.cop = get<double>(in);
  table.spec_.latent_fraction = get<double>(in);
  table.spec_.dt_s = get<double>(in);
  table.spec_.sim_steps = get<int32_t>(in);
  const uint64_t count = get<uint64_t>(in);
  table.spec_.validate();
  if (count != table.spec_.node_count()) {
    throw ConfigError("base table value count disagrees with axes: " + path);
  }
  table.values_.resize(count);
  in.read(reinterpret_cast<char*>(table.values_.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ConfigError("truncated base table: " + path);
  return table;
}

}  // namespace acfleet
