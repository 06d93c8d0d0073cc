#include "acfleet/env.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "acfleet/errors.hpp"
#include "acfleet/parallel.hpp"

namespace acfleet {

namespace {

constexpr uint64_t kStreamInit = 0x11;
constexpr uint64_t kStreamComm = 0x22;
constexpr uint64_t kStreamNoise = 0x33;
constexpr uint64_t kStreamHeterogeneity = 0x44;

constexpr double kMinTemp = -50.0;
constexpr double kMaxTemp = 80.0;

std::shared_ptr<const BaseSignalTable> default_base_table() {
  static std::mutex mu;
  static std::shared_ptr<const BaseSignalTable> table;
  std::lock_guard<std::mutex> lock(mu);
  if (!table) {
    table = std::make_shared<const BaseSignalTable>(
        BaseSignalTable::build(BaseTableGridSpec::defaults(), resolve_jobs(0)));
  }
  return table;
}

}  // namespace

double OutdoorProfile::at(double sim_time_s) const {
  const double mid = 0.5 * (min_c + max_c);
  const double amp = 0.5 * (max_c - min_c);
  const double phase =
      2.0 * std::numbers::pi * (sim_time_s - min_hour * 3600.0) / 86400.0;
  return mid - amp * std::cos(phase);
}

void EnvConfig::validate() const {
  if (houses < 1) throw ConfigError("env: need at least one house");
  if (comm_neighbours < 0 || comm_neighbours >= houses) {
    throw ConfigError("env: comm_neighbours must be in [0, houses)");
  }
  if (!(dt_s > 0.0)) throw ConfigError("env: dt must be > 0");
  if (comm_dropout < 0.0 || comm_dropout > 1.0) {
    throw ConfigError("env: comm_dropout must be in [0, 1]");
  }
  if (init_temp_sigma_c < 0.0) throw ConfigError("env: init noise sigma must be >= 0");
  if (alpha_temp < 0.0 || alpha_sig < 0.0) throw ConfigError("env: negative reward weight");
  if (!(outdoor.max_c >= outdoor.min_c)) throw ConfigError("env: outdoor max < min");
  if (noise_amplitude < 0.0) throw ConfigError("env: noise amplitude must be >= 0");
  if (base_signal_scale < 0.0) throw ConfigError("env: signal scale must be >= 0");
  thermal.validate();
  ac.validate(dt_s);
  noise.validate();
  for (double ka : heterogeneity.cooling_choices_w) {
    if (!(ka > 0.0)) throw ConfigError("env: heterogeneous capacity must be > 0");
  }
  for (double lo : heterogeneity.lockout_choices_s) {
    AcParams probe = ac;
    probe.lockout_s = lo;
    probe.validate(dt_s);
  }
}

std::vector<int> neighbour_offsets(int agent, int houses, int comm_neighbours) {
  std::vector<int> out;
  const int reach = comm_neighbours / 2;
  out.reserve(static_cast<size_t>(2 * reach));
  for (int off = -reach; off <= reach; ++off) {
    if (off == 0) continue;
    int idx = (agent + off) % houses;
    if (idx < 0) idx += houses;
    out.push_back(idx);
  }
  return out;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
  const int n = config_.houses;

  // Per-house parameters, possibly dispersed around the configured values.
  thermal_.assign(static_cast<size_t>(n), config_.thermal);
  ac_params_.assign(static_cast<size_t>(n), config_.ac);
  if (!config_.heterogeneity.homogeneous()) {
    Rng rng(mix_seed(config_.seed, kStreamHeterogeneity));
    const double frac = config_.heterogeneity.thermal_sigma_frac;
    for (int i = 0; i < n; ++i) {
      auto& th = thermal_[static_cast<size_t>(i)];
      if (frac > 0.0) {
        th.wall_conductance =
            rng.truncated_positive_normal(th.wall_conductance, frac * th.wall_conductance);
        th.mass_capacity =
            rng.truncated_positive_normal(th.mass_capacity, frac * th.mass_capacity);
        th.air_capacity =
            rng.truncated_positive_normal(th.air_capacity, frac * th.air_capacity);
        th.mass_conductance =
            rng.truncated_positive_normal(th.mass_conductance, frac * th.mass_conductance);
        th.validate();
      }
      auto& ac = ac_params_[static_cast<size_t>(i)];
      if (!config_.heterogeneity.cooling_choices_w.empty()) {
        ac.cooling_capacity_w = config_.heterogeneity.cooling_choices_w[static_cast<size_t>(
            rng.below(config_.heterogeneity.cooling_choices_w.size()))];
      }
      if (!config_.heterogeneity.lockout_choices_s.empty()) {
        ac.lockout_s = config_.heterogeneity.lockout_choices_s[static_cast<size_t>(
            rng.below(config_.heterogeneity.lockout_choices_s.size()))];
      }
    }
  }

  coeff_.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    coeff_.push_back(derive_coefficients(thermal_[static_cast<size_t>(i)], config_.dt_s));
  }

  neighbours_.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    neighbours_.push_back(neighbour_offsets(i, n, config_.comm_neighbours));
  }
  ring_size_ = 2 * (config_.comm_neighbours / 2);

  norm_.temp_div = 30.0;
  norm_.lockout_div = config_.ac.lockout_s > 0.0 ? config_.ac.lockout_s : 1.0;
  norm_.power_div = config_.ac.power_w();

  steps_per_refresh_ = std::max(1, static_cast<int>(std::lround(300.0 / config_.dt_s)));
  config_.noise.seed = mix_seed(config_.seed, kStreamNoise);

  table_ = config_.base_table ? config_.base_table : default_base_table();

  reset();
}

void Environment::reset() {
  const int n = config_.houses;
  Rng rng(mix_seed(config_.seed, kStreamInit));
  houses_.assign(static_cast<size_t>(n), HouseState{});
  for (auto& h : houses_) {
    h.air_temp = config_.target_temp_c +
                 std::abs(rng.normal(0.0, config_.init_temp_sigma_c));
    h.mass_temp = config_.target_temp_c +
                  std::abs(rng.normal(0.0, config_.init_temp_sigma_c));
  }
  finish_reset();
}

void Environment::reset_with_temps(std::span<const double> air,
                                   std::span<const double> mass) {
  const size_t n = static_cast<size_t>(config_.houses);
  if (air.size() != n || mass.size() != n) {
    throw ConfigError("reset_with_temps: need one temperature per house");
  }
  houses_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    houses_[i].air_temp = air[i];
    houses_[i].mass_temp = mass[i];
  }
  finish_reset();
}

void Environment::finish_reset() {
  acs_.assign(static_cast<size_t>(config_.houses), AcState{});
  comm_rng_ = Rng(mix_seed(config_.seed, kStreamComm));
  step_count_ = 0;
  time_s_ = 0.0;
  consumption_w_ = 0.0;
  diverged_ = false;
  refresh_base_demand();
  signal_ = signal_at(time_s_, base_demand_w_, config_.noise, config_.noise_amplitude);
}

void Environment::refresh_base_demand() {
  const double outdoor = config_.outdoor.at(time_s_);
  double total = 0.0;
  for (int i = 0; i < config_.houses; ++i) {
    const size_t s = static_cast<size_t>(i);
    total += table_->lookup(houses_[s].air_temp, houses_[s].mass_temp, outdoor,
                            config_.target_temp_c, thermal_[s],
                            ac_params_[s].cooling_capacity_w);
  }
  base_demand_w_ = total * config_.base_signal_scale;
}

double Environment::current_solar_gain_w() const {
  const int day = config_.start_day_of_year + static_cast<int>(time_s_ / 86400.0);
  return solar_gain(((day - 1) % 365) + 1, std::fmod(time_s_, 86400.0), config_.solar);
}

StepResult Environment::step(std::span<const uint8_t> want_on) {
  const int n = config_.houses;
  if (want_on.size() != static_cast<size_t>(n)) {
    throw ConfigError("step: need one action per agent");
  }

  const double outdoor = config_.outdoor.at(time_s_);
  const double gain = current_solar_gain_w();

  double consumption = 0.0;
  for (int i = 0; i < n; ++i) {
    const size_t s = static_cast<size_t>(i);
    acs_[s] = apply_action(acs_[s], ac_params_[s], want_on[s] != 0, config_.dt_s);
    const AcOutputs out = ac_outputs(ac_params_[s], acs_[s]);
    consumption += out.power_w;

    ThermalInputs in{outdoor, out.heat_w, gain, config_.dt_s};
    HouseState next = step_thermal(houses_[s], thermal_[s], in, coeff_[s]);
    if (next.air_temp < kMinTemp || next.air_temp > kMaxTemp ||
        next.mass_temp < kMinTemp || next.mass_temp > kMaxTemp) {
      diverged_ = true;
      next.air_temp = std::clamp(next.air_temp, kMinTemp, kMaxTemp);
      next.mass_temp = std::clamp(next.mass_temp, kMinTemp, kMaxTemp);
    }
    houses_[s] = next;
  }
  consumption_w_ = consumption;

  // The reward pairs this step's consumption with the target the agents were
  // tracking when they acted; the refreshed signal below belongs to the next
  // observation.
  const double tracked = signal_.total_w;

  ++step_count_;
  time_s_ += config_.dt_s;
  if (step_count_ % steps_per_refresh_ == 0) refresh_base_demand();
  signal_ = signal_at(time_s_, base_demand_w_, config_.noise, config_.noise_amplitude);

  StepResult result;
  result.consumption_w = consumption_w_;
  result.signal_w = tracked;
  result.next_signal_w = signal_.total_w;
  result.diverged = diverged_;
  result.rewards.resize(static_cast<size_t>(n));
  const double sig_err = (consumption_w_ - tracked) / n;
  const double sig_penalty = config_.alpha_sig * sig_err * sig_err;
  for (int i = 0; i < n; ++i) {
    const double dt_err = houses_[static_cast<size_t>(i)].air_temp - config_.target_temp_c;
    result.rewards[static_cast<size_t>(i)] =
        -(config_.alpha_temp * dt_err * dt_err + sig_penalty);
  }
  return result;
}

GlobalStateView Environment::global_state() const {
  return GlobalStateView{time_s_,        signal_.total_w, consumption_w_,
                         outdoor_temp_c(), houses_,        acs_};
}

Observation Environment::observe(int i) const {
  const size_t s = static_cast<size_t>(i);
  const double n = static_cast<double>(config_.houses);
  return Observation{houses_[s].air_temp,
                     houses_[s].mass_temp,
                     config_.target_temp_c,
                     acs_[s].on,
                     acs_[s].lockout_remaining_s,
                     signal_.total_w / n,
                     consumption_w_ / n};
}

HeMessage Environment::message_from(int j) const {
  const size_t s = static_cast<size_t>(j);
  return HeMessage{houses_[s].air_temp - config_.target_temp_c,
                   acs_[s].lockout_remaining_s, acs_[s].on};
}

void Environment::observation_vector(int i, std::span<double> out) const {
  if (out.size() < static_cast<size_t>(Observation::kFields)) {
    throw ShapeMismatch("observation_vector: output too small");
  }
  const Observation o = observe(i);
  const double lock_div =
      ac_params_[static_cast<size_t>(i)].lockout_s > 0.0
          ? ac_params_[static_cast<size_t>(i)].lockout_s
          : norm_.lockout_div;
  out[0] = o.air_temp_c / norm_.temp_div;
  out[1] = o.mass_temp_c / norm_.temp_div;
  out[2] = o.target_temp_c / norm_.temp_div;
  out[3] = o.ac_on ? 1.0 : 0.0;
  out[4] = o.lockout_remaining_s / lock_div;
  out[5] = o.signal_per_agent_w / norm_.power_div;
  out[6] = o.consumption_per_agent_w / norm_.power_div;
}

void Environment::augmented_observation(int i, std::span<double> out) {
  const size_t want = static_cast<size_t>(augmented_size());
  if (out.size() < want) {
    throw ShapeMismatch("augmented_observation: output too small");
  }
  observation_vector(i, out);
  size_t pos = Observation::kFields;
  for (int j : neighbours_[static_cast<size_t>(i)]) {
    const bool dropped =
        config_.comm_dropout > 0.0 && comm_rng_.bernoulli(config_.comm_dropout);
    if (dropped) {
      out[pos] = out[pos + 1] = out[pos + 2] = 0.0;
    } else {
      const HeMessage m = message_from(j);
      const double lock_div = ac_params_[static_cast<size_t>(j)].lockout_s > 0.0
                                  ? ac_params_[static_cast<size_t>(j)].lockout_s
                                  : norm_.lockout_div;
      out[pos] = m.temp_diff_c / norm_.temp_div;
      out[pos + 1] = m.lockout_remaining_s / lock_div;
      out[pos + 2] = m.ac_on ? 1.0 : 0.0;
    }
    pos += HeMessage::kFields;
  }
}

}  // namespace acfleet
