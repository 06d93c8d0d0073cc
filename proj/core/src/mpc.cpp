#include "acfleet/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "acfleet/errors.hpp"
#include "acfleet/hvac.hpp"

namespace acfleet {

namespace {

constexpr int kMaxEnumerateVars = 24;

// Lockout bookkeeping in whole steps, mirroring hvac::apply_action.
struct LockClock {
  bool on;
  int remaining;  // steps
};

inline bool lock_step(LockClock& c, bool want_on, int total_steps) {
  // Returns whether the request was honored.
  if (c.on) {
    if (want_on) return true;
    c.on = false;
    c.remaining = std::max(total_steps - 1, 0);
    return true;
  }
  if (want_on && c.remaining == 0) {
    c.on = true;
    return true;
  }
  const bool honored = !want_on;
  c.remaining = std::max(c.remaining - 1, 0);
  return honored;
}

}  // namespace

MpcProblem MpcProblem::from_env(const Environment& env, int horizon) {
  if (horizon < 1) throw ConfigError("mpc: horizon must be >= 1");
  MpcProblem p;
  p.horizon = horizon;
  p.dt_s = env.dt_s();
  p.signal_w = env.signal_w();
  p.alpha_temp = env.config().alpha_temp;
  p.alpha_sig = env.config().alpha_sig;
  p.target_temp = env.config().target_temp_c;

  const double outdoor = env.outdoor_temp_c();
  const double gain = env.current_solar_gain_w();

  p.plants.reserve(static_cast<size_t>(env.num_houses()));
  for (int i = 0; i < env.num_houses(); ++i) {
    const ThermalParams& tp = env.thermal_params(i);
    const AcParams& ap = env.ac_params(i);
    const ThermalCoefficients coeff = derive_coefficients(tp, p.dt_s);

    auto eval = [&](double air, double mass, double hvac_heat) {
      return step_thermal(HouseState{air, mass}, tp,
                          ThermalInputs{outdoor, hvac_heat, gain, p.dt_s}, coeff);
    };
    // The step is affine in (air, mass, hvac heat); three extra evaluations
    // recover the matrix and both offsets exactly.
    const HouseState f00 = eval(0.0, 0.0, 0.0);
    const HouseState fa = eval(1.0, 0.0, 0.0);
    const HouseState fm = eval(0.0, 1.0, 0.0);
    const HouseState fq = eval(0.0, 0.0, ap.heat_w());

    Plant plant;
    plant.a11 = fa.air_temp - f00.air_temp;
    plant.a21 = fa.mass_temp - f00.mass_temp;
    plant.a12 = fm.air_temp - f00.air_temp;
    plant.a22 = fm.mass_temp - f00.mass_temp;
    plant.boff_air = f00.air_temp;
    plant.boff_mass = f00.mass_temp;
    plant.bact_air = fq.air_temp - f00.air_temp;
    plant.bact_mass = fq.mass_temp - f00.mass_temp;
    plant.air0 = env.house(i).air_temp;
    plant.mass0 = env.house(i).mass_temp;
    plant.power_w = ap.power_w();
    plant.on0 = env.ac_state(i).on;

    const double total = ap.lockout_s / p.dt_s;
    if (std::abs(total - std::round(total)) > 1e-9) {
      throw ConfigError("mpc: lockout must be a whole number of planning steps");
    }
    plant.lockout_total_steps = static_cast<int>(std::lround(total));
    const double rem = env.ac_state(i).lockout_remaining_s / p.dt_s;
    plant.lockout_remaining_steps = static_cast<int>(std::lround(rem));
    p.plants.push_back(plant);
  }
  return p;
}

void MpcProblem::validate() const {
  if (horizon < 1 || plants.empty()) throw ConfigError("mpc: empty problem");
  if (horizon > 64) throw ConfigError("mpc: horizon capped at 64 steps");
  if (!(dt_s > 0.0)) throw ConfigError("mpc: dt must be > 0");
  if (signal_w < 0.0) throw ConfigError("mpc: negative signal");
}

double mpc_objective(const MpcProblem& p, std::span<const uint8_t> plan) {
  const int n = static_cast<int>(p.plants.size());
  const int h = p.horizon;
  double temp_cost = 0.0;
  double power[64];
  std::fill(power, power + h, 0.0);

  for (int i = 0; i < n; ++i) {
    const auto& pl = p.plants[static_cast<size_t>(i)];
    double air = pl.air0, mass = pl.mass0;
    for (int t = 0; t < h; ++t) {
      const bool on = plan[static_cast<size_t>(p.var(t, i))] != 0;
      if (on) power[t] += pl.power_w;
      const double next_air = pl.a11 * air + pl.a12 * mass + pl.boff_air +
                              (on ? pl.bact_air : 0.0);
      const double next_mass = pl.a21 * air + pl.a22 * mass + pl.boff_mass +
                               (on ? pl.bact_mass : 0.0);
      air = next_air;
      mass = next_mass;
      const double err = air - p.target_temp;
      temp_cost += err * err;
    }
  }
  double sig_cost = 0.0;
  for (int t = 0; t < h; ++t) {
    const double err = power[t] - p.signal_w;
    sig_cost += err * err;
  }
  return p.alpha_sig * sig_cost + p.alpha_temp * temp_cost;
}

bool mpc_feasible(const MpcProblem& p, std::span<const uint8_t> plan) {
  const int n = static_cast<int>(p.plants.size());
  for (int i = 0; i < n; ++i) {
    const auto& pl = p.plants[static_cast<size_t>(i)];
    LockClock clock{pl.on0, pl.lockout_remaining_steps};
    for (int t = 0; t < p.horizon; ++t) {
      if (!lock_step(clock, plan[static_cast<size_t>(p.var(t, i))] != 0,
                     pl.lockout_total_steps)) {
        return false;
      }
    }
  }
  return true;
}

MpcResult mpc_enumerate(const MpcProblem& p) {
  p.validate();
  const int nv = p.num_vars();
  if (nv > kMaxEnumerateVars) {
    throw ConfigError("mpc: enumeration limited to 24 variables");
  }
  const uint64_t count = uint64_t{1} << nv;

  MpcResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<uint8_t> plan(static_cast<size_t>(nv));
  for (uint64_t bits = 0; bits < count; ++bits) {
    for (int v = 0; v < nv; ++v) plan[static_cast<size_t>(v)] = (bits >> v) & 1u;
    if (!mpc_feasible(p, plan)) continue;
    const double obj = mpc_objective(p, plan);
    if (obj < best.objective) {
      best.objective = obj;
      best.plan = plan;
    }
    ++best.nodes_explored;
  }
  const int n = static_cast<int>(p.plants.size());
  best.first_actions.assign(best.plan.begin(), best.plan.begin() + n);
  return best;
}

namespace {

// Dense quadratic form f(z) = z^T P z + q^T z + r matching mpc_objective on
// every binary plan (and extending it to the box for relaxation bounds).
struct QuadForm {
  int nv;
  std::vector<double> p;  // nv x nv, symmetric
  std::vector<double> q;
  double r = 0.0;
  double lipschitz = 1.0;  // upper bound on ||2P||_2

  double value(const std::vector<double>& z) const {
    double acc = r;
    for (int i = 0; i < nv; ++i) {
      const double zi = z[static_cast<size_t>(i)];
      if (zi == 0.0) {
        continue;
      }
      acc += q[static_cast<size_t>(i)] * zi;
      const double* row = &p[static_cast<size_t>(i) * static_cast<size_t>(nv)];
      double dot = 0.0;
      for (int j = 0; j < nv; ++j) dot += row[j] * z[static_cast<size_t>(j)];
      acc += zi * dot;
    }
    return acc;
  }

  void gradient(const std::vector<double>& z, std::vector<double>& g) const {
    for (int i = 0; i < nv; ++i) {
      const double* row = &p[static_cast<size_t>(i) * static_cast<size_t>(nv)];
      double dot = 0.0;
      for (int j = 0; j < nv; ++j) dot += row[j] * z[static_cast<size_t>(j)];
      g[static_cast<size_t>(i)] = 2.0 * dot + q[static_cast<size_t>(i)];
    }
  }
};

QuadForm build_quadratic(const MpcProblem& p) {
  const int n = static_cast<int>(p.plants.size());
  const int h = p.horizon;
  const int nv = p.num_vars();

  QuadForm f;
  f.nv = nv;
  f.p.assign(static_cast<size_t>(nv) * static_cast<size_t>(nv), 0.0);
  f.q.assign(static_cast<size_t>(nv), 0.0);

  auto pij = [&](int a, int b) -> double& {
    return f.p[static_cast<size_t>(a) * static_cast<size_t>(nv) + static_cast<size_t>(b)];
  };

  // Signal term: alpha_sig * sum_t (sum_i Pa_i z_{t,i} - s)^2.
  for (int t = 0; t < h; ++t) {
    for (int i = 0; i < n; ++i) {
      const double pi = p.plants[static_cast<size_t>(i)].power_w;
      const int vi = p.var(t, i);
      f.q[static_cast<size_t>(vi)] += -2.0 * p.alpha_sig * p.signal_w * pi;
      for (int j = 0; j < n; ++j) {
        const double pj = p.plants[static_cast<size_t>(j)].power_w;
        pij(vi, p.var(t, j)) += p.alpha_sig * pi * pj;
      }
    }
    f.r += p.alpha_sig * p.signal_w * p.signal_w;
  }

  // Temperature term per house: air errors are affine in that house's own
  // actions with impulse-response coefficients from powers of A.
  for (int i = 0; i < n; ++i) {
    const auto& pl = p.plants[static_cast<size_t>(i)];

    // base[t] = air error after t+1 all-off steps; imp[k] = effect on air of
    // one activation k steps earlier.
    std::vector<double> base(static_cast<size_t>(h));
    {
      double air = pl.air0, mass = pl.mass0;
      for (int t = 0; t < h; ++t) {
        const double na = pl.a11 * air + pl.a12 * mass + pl.boff_air;
        const double nm = pl.a21 * air + pl.a22 * mass + pl.boff_mass;
        air = na;
        mass = nm;
        base[static_cast<size_t>(t)] = air - p.target_temp;
      }
    }
    std::vector<double> imp(static_cast<size_t>(h));
    {
      double air = pl.bact_air, mass = pl.bact_mass;
      imp[0] = air;
      for (int k = 1; k < h; ++k) {
        const double na = pl.a11 * air + pl.a12 * mass;
        const double nm = pl.a21 * air + pl.a22 * mass;
        air = na;
        mass = nm;
        imp[static_cast<size_t>(k)] = air;
      }
    }

    for (int t = 0; t < h; ++t) {
      // err_t = base[t] + sum_{tau <= t} imp[t - tau] z_{tau,i}
      f.r += p.alpha_temp * base[static_cast<size_t>(t)] * base[static_cast<size_t>(t)];
      for (int tau = 0; tau <= t; ++tau) {
        const int vt = p.var(tau, i);
        const double ci = imp[static_cast<size_t>(t - tau)];
        f.q[static_cast<size_t>(vt)] +=
            2.0 * p.alpha_temp * base[static_cast<size_t>(t)] * ci;
        for (int tau2 = 0; tau2 <= t; ++tau2) {
          pij(vt, p.var(tau2, i)) +=
              p.alpha_temp * ci * imp[static_cast<size_t>(t - tau2)];
        }
      }
    }
  }

  // Spectral norm bound via 50 power iterations, padded 2%.
  std::vector<double> v(static_cast<size_t>(nv), 1.0), w(static_cast<size_t>(nv));
  double lambda = 0.0;
  for (int it = 0; it < 50; ++it) {
    for (int i = 0; i < nv; ++i) {
      const double* row = &f.p[static_cast<size_t>(i) * static_cast<size_t>(nv)];
      double dot = 0.0;
      for (int j = 0; j < nv; ++j) dot += row[j] * v[static_cast<size_t>(j)];
      w[static_cast<size_t>(i)] = 2.0 * dot;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm <= 0.0) break;
    lambda = norm;
    for (int i = 0; i < nv; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / norm;
  }
  f.lipschitz = std::max(lambda * 1.02, 1e-12);
  return f;
}

struct BnbContext {
  const MpcProblem* problem;
  QuadForm quad;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  std::vector<uint8_t> incumbent_plan;
  uint64_t nodes = 0;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  bool budget_hit = false;
};

// Violations already certain from the fixed variables alone. Each rule is
// sound for every completion of the free variables; full feasibility is
// still verified at the leaves.
//  R1: an ON fixed inside the initial lockout window.
//  R2: an ON at t right after a fixed OFF, with another fixed ON within the
//      preceding lockout window (the OFF transition between them locks the
//      unit past t).
//  R3: same pattern for an initially-ON unit with t inside the lockout
//      window (its first in-plan OFF is at latest t-1, locking it past t).
bool certainly_infeasible(const MpcProblem& p, const std::vector<int8_t>& fixed) {
  const int n = static_cast<int>(p.plants.size());
  for (int i = 0; i < n; ++i) {
    const auto& pl = p.plants[static_cast<size_t>(i)];
    for (int t = 0; t < p.horizon; ++t) {
      if (fixed[static_cast<size_t>(p.var(t, i))] != 1) continue;
      if (t < pl.lockout_remaining_steps) return true;  // R1
      if (t == 0 || fixed[static_cast<size_t>(p.var(t - 1, i))] != 0) continue;
      const int window = std::min(t - 1, pl.lockout_total_steps);
      for (int back = 2; back <= window; ++back) {
        if (fixed[static_cast<size_t>(p.var(t - back, i))] == 1) return true;  // R2
      }
      if (pl.on0 && t < pl.lockout_total_steps) return true;  // R3
    }
  }
  return false;
}

void bnb_recurse(BnbContext& ctx, std::vector<int8_t>& fixed,
                 std::vector<double>& warm) {
  if (ctx.budget_hit) return;
  if (ctx.has_deadline && std::chrono::steady_clock::now() > ctx.deadline) {
    ctx.budget_hit = true;
    return;
  }
  ++ctx.nodes;
  const MpcProblem& p = *ctx.problem;
  const int nv = ctx.quad.nv;

  if (certainly_infeasible(p, fixed)) return;

  // Fully fixed: evaluate directly.
  bool all_fixed = true;
  for (int v = 0; v < nv; ++v) {
    if (fixed[static_cast<size_t>(v)] < 0) {
      all_fixed = false;
      break;
    }
  }
  if (all_fixed) {
    std::vector<uint8_t> plan(static_cast<size_t>(nv));
    for (int v = 0; v < nv; ++v) plan[static_cast<size_t>(v)] = static_cast<uint8_t>(fixed[static_cast<size_t>(v)]);
    if (!mpc_feasible(p, plan)) return;
    const double obj = mpc_objective(p, plan);
    if (obj < ctx.incumbent_obj) {
      ctx.incumbent_obj = obj;
      ctx.incumbent_plan = std::move(plan);
    }
    return;
  }

  // Projected gradient on the box relaxation (fixed coordinates pinned).
  std::vector<double> x(static_cast<size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    x[static_cast<size_t>(v)] =
        fixed[static_cast<size_t>(v)] < 0 ? warm[static_cast<size_t>(v)]
                                          : static_cast<double>(fixed[static_cast<size_t>(v)]);
  }
  std::vector<double> g(static_cast<size_t>(nv));
  const double eta = 1.0 / ctx.quad.lipschitz;
  for (int it = 0; it < 120; ++it) {
    ctx.quad.gradient(x, g);
    double moved = 0.0;
    for (int v = 0; v < nv; ++v) {
      if (fixed[static_cast<size_t>(v)] >= 0) continue;
      const double nx = std::clamp(x[static_cast<size_t>(v)] - eta * g[static_cast<size_t>(v)], 0.0, 1.0);
      moved += std::abs(nx - x[static_cast<size_t>(v)]);
      x[static_cast<size_t>(v)] = nx;
    }
    if (moved < 1e-12) break;
  }

  // Valid lower bound over the node's box from the gradient linearization.
  ctx.quad.gradient(x, g);
  double bound = ctx.quad.value(x);
  for (int v = 0; v < nv; ++v) {
    if (fixed[static_cast<size_t>(v)] >= 0) continue;
    const double gv = g[static_cast<size_t>(v)];
    bound += gv > 0.0 ? -gv * x[static_cast<size_t>(v)]
                      : gv * (1.0 - x[static_cast<size_t>(v)]);
  }
  const double eps = 1e-12 * std::max(1.0, std::abs(ctx.incumbent_obj));
  if (bound >= ctx.incumbent_obj - eps) return;

  // Most fractional free variable; dive toward the relaxation's suggestion.
  int branch_var = -1;
  double best_frac = 2.0;
  for (int v = 0; v < nv; ++v) {
    if (fixed[static_cast<size_t>(v)] >= 0) continue;
    const double frac = std::abs(x[static_cast<size_t>(v)] - 0.5);
    if (frac < best_frac) {
      best_frac = frac;
      branch_var = v;
    }
  }
  const int8_t first = x[static_cast<size_t>(branch_var)] >= 0.5 ? 1 : 0;
  for (int child = 0; child < 2; ++child) {
    fixed[static_cast<size_t>(branch_var)] = child == 0 ? first : static_cast<int8_t>(1 - first);
    bnb_recurse(ctx, fixed, x);
    if (ctx.budget_hit) break;
  }
  fixed[static_cast<size_t>(branch_var)] = -1;
}

}  // namespace

MpcResult mpc_branch_and_bound(const MpcProblem& p, double time_budget_s) {
  p.validate();
  const int nv = p.num_vars();
  const int n = static_cast<int>(p.plants.size());

  BnbContext ctx;
  ctx.problem = &p;
  ctx.quad = build_quadratic(p);
  if (time_budget_s > 0.0) {
    ctx.has_deadline = true;
    ctx.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(time_budget_s));
  }

  // All-off is always feasible and seeds the incumbent.
  ctx.incumbent_plan.assign(static_cast<size_t>(nv), 0);
  ctx.incumbent_obj = mpc_objective(p, ctx.incumbent_plan);

  std::vector<int8_t> fixed(static_cast<size_t>(nv), -1);
  std::vector<double> warm(static_cast<size_t>(nv), 0.5);
  bnb_recurse(ctx, fixed, warm);

  MpcResult result;
  result.plan = std::move(ctx.incumbent_plan);
  result.objective = ctx.incumbent_obj;
  result.nodes_explored = ctx.nodes;
  result.time_budget_hit = ctx.budget_hit;
  result.first_actions.assign(result.plan.begin(), result.plan.begin() + n);
  return result;
}

void MpcController::select_actions(Environment& env, std::vector<uint8_t>& out) {
  const MpcProblem problem = MpcProblem::from_env(env, config_.horizon);
  MpcResult result = config_.solver == MpcSolver::enumerate
                         ? mpc_enumerate(problem)
                         : mpc_branch_and_bound(problem, config_.time_budget_s);
  if (sink_) sink_(env.time_s(), result);
  out = std::move(result.first_actions);
}

}  // namespace acfleet
