#include "decaylab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "decaylab/energy.hpp"

namespace decaylab {

std::string NonConvergence::message(std::size_t step, double residual) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "Newton did not converge at step %zu (relative residual %.3e)", step, residual);
  return buf;
}

namespace {

constexpr int kMaxHalvings = 10;
constexpr double kEnergyFloor = 1e-14;

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double xi : x) m = std::max(m, std::abs(xi));
  return m;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

Vec advanced_u(const State& state, std::span<const double> v, double dt) {
  Vec u(state.u.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = state.u[i] + dt * v[i];
  return u;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double xi) { return std::isfinite(xi); });
}

}  // namespace

Vec step_residual(const State& state, std::span<const double> v, double dt, const ProblemSpec& spec) {
  const auto& ex = spec.exponents;
  const double eps = spec.eps_reg;
  const double t1 = state.t + dt;
  const Vec u1 = advanced_u(state, v, dt);
  const Vec au = a_apply(u1, ex.q, spec.a, spec.grid.h, eps);
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double b = spec.damping(t1, spec.grid.node(i));
    r[i] = phi(v[i], ex.ell, eps) - state.w[i] + dt * au[i] + dt * b * phi(v[i], ex.m, eps);
  }
  return r;
}

Tridiagonal step_jacobian(const State& state, std::span<const double> v, double dt, const ProblemSpec& spec) {
  const auto& ex = spec.exponents;
  const double eps = spec.eps_reg;
  const double t1 = state.t + dt;
  const Vec u1 = advanced_u(state, v, dt);
  Tridiagonal jac = a_jacobian(u1, ex.q, spec.a, spec.grid.h, eps);
  const double dt2 = dt * dt;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double b = spec.damping(t1, spec.grid.node(i));
    jac.diag[i] = phi_prime(v[i], ex.ell, eps) + dt * b * phi_prime(v[i], ex.m, eps) + dt2 * jac.diag[i];
    if (i + 1 < v.size()) {
      jac.lower[i] *= dt2;
      jac.upper[i] *= dt2;
    }
  }
  return jac;
}

StepOutcome implicit_step(const State& state, double dt, const ProblemSpec& spec) {
  const auto& ex = spec.exponents;
  const auto& nw = spec.newton;
  const double eps = spec.eps_reg;
  const double h = spec.grid.h;

  StepOutcome out;
  const Vec v_old = p_invert(state.w, ex.ell, eps);
  const Vec au_old = a_apply(state.u, ex.q, spec.a, h, eps);
  const double scale = max_abs(state.w) + dt * max_abs(au_old);

  Vec v = v_old;
  Vec r = step_residual(state, v, dt, spec);
  double rnorm = max_abs(r);
  auto converged = [&](double res) { return res <= nw.tol * scale; };

  int iter = 0;
  while (!converged(rnorm)) {
    if (iter >= nw.max_iter) break;
    ++iter;
    Vec dir;
    try {
      Vec neg(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
      dir = step_jacobian(state, v, dt, spec).solve(neg);
    } catch (const std::runtime_error&) {
      break;
    }
    const double r2 = norm2(r);
    double alpha = 1.0;
    bool found = false;
    Vec trial(v.size());
    Vec r_trial;
    for (int k = 0; k <= nw.max_halvings; ++k) {
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + alpha * dir[i];
      r_trial = step_residual(state, trial, dt, spec);
      const double t2 = norm2(r_trial);
      if (std::isfinite(t2) && t2 <= (1.0 - 1e-4 * alpha) * r2) {
        found = true;
        break;
      }
      alpha *= nw.backtrack;
    }
    if (!found) {
      // at the roundoff floor no step can reduce ||R||; take the full step if it is already tiny
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + dir[i];
      r_trial = step_residual(state, trial, dt, spec);
      if (!converged(max_abs(r_trial))) break;
    }
    v = trial;
    r = std::move(r_trial);
    rnorm = max_abs(r);
  }

  out.newton_iters = iter;
  out.residual_norm = scale > 0.0 ? rnorm / scale : rnorm;
  out.accepted = converged(rnorm) && all_finite(v);
  if (!out.accepted) return out;

  State next;
  next.t = state.t + dt;
  next.u = advanced_u(state, v, dt);
  next.w = p_apply(v, ex.ell, eps);

  out.dissipation_physical = dt * dissipation(next.t, v, spec);

  // Bregman remainders: E+ - E = -dt<B,v+> - (kinetic + potential remainders) + <v+, R>
  Vec dw(v.size()), du(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    dw[i] = state.w[i] - next.w[i];
    du[i] = state.u[i] - next.u[i];
  }
  const double kin_old = p_star(v_old, ex.ell, h, eps);
  const double kin_new = p_star(v, ex.ell, h, eps);
  const double pot_old = a_potential(state.u, ex.q, spec.a, h, eps);
  const double pot_new = a_potential(next.u, ex.q, spec.a, h, eps);
  const Vec au_new = a_apply(next.u, ex.q, spec.a, h, eps);
  const double kinetic_remainder = kin_old - kin_new - inner_h(v, dw, h);
  const double potential_remainder = pot_old - pot_new - inner_h(au_new, du, h);
  out.dissipation_numerical = kinetic_remainder + potential_remainder;
  out.state = std::move(next);
  return out;
}

namespace {

struct Advance {
  State state;
  int newton_iters{0};
  double residual{0.0};
  double dissipation_physical{0.0};
  double dissipation_numerical{0.0};
  long retries{0};
};

Advance advance(const State& state, double dt, const ProblemSpec& spec, std::size_t step, int depth) {
  StepOutcome o = implicit_step(state, dt, spec);
  if (o.accepted) {
    return Advance{std::move(o.state), o.newton_iters, o.residual_norm, o.dissipation_physical,
                   o.dissipation_numerical, 0};
  }
  if (depth >= kMaxHalvings) throw NonConvergence(step, o.residual_norm);
  Advance first = advance(state, 0.5 * dt, spec, step, depth + 1);
  Advance second = advance(first.state, 0.5 * dt, spec, step, depth + 1);
  second.newton_iters += first.newton_iters + o.newton_iters;
  second.residual = std::max(first.residual, second.residual);
  second.dissipation_physical += first.dissipation_physical;
  second.dissipation_numerical += first.dissipation_numerical;
  second.retries += first.retries + 1;
  return second;
}

std::size_t step_count(const ProblemSpec& spec) {
  if (spec.t_end <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt - 1e-9));
}

double step_time(const ProblemSpec& spec, std::size_t k, std::size_t total) {
  if (k >= total) return spec.t_end;
  return std::min(static_cast<double>(k) * spec.dt, spec.t_end);
}

bool should_record(const ProblemSpec& spec, std::size_t k, std::size_t total) {
  return k % spec.record_every == 0 || k == total;
}

void push_snapshot(Trajectory& traj, const State& s) {
  traj.snapshots.push_back(Snapshot{traj.samples.size() - 1, s});
}

bool want_snapshot(const ProblemSpec& spec, std::size_t sample_index) {
  return spec.snapshot_every > 0 && sample_index % spec.snapshot_every == 0;
}

}  // namespace

Trajectory run_simulation(const ProblemSpec& spec) {
  spec.validate();
  Trajectory traj;
  traj.spec = spec;

  State state = initial_state(spec);
  Sample s0;
  s0.energy = total_energy(state, spec);
  s0.cross_term = inner_h(state.w, state.u, spec.grid.h);
  traj.samples.push_back(s0);
  push_snapshot(traj, state);

  const double e0 = s0.energy.total;
  const std::size_t total = step_count(spec);
  double cum_total = 0.0;
  double cum_phys = 0.0;
  int iters_since_record = 0;
  double worst_residual = 0.0;

  for (std::size_t k = 1; k <= total; ++k) {
    const double t_next = step_time(spec, k, total);
    const double dt = t_next - state.t;
    Advance adv = advance(state, dt, spec, k, 0);
    adv.state.t = t_next;
    state = std::move(adv.state);
    cum_total += adv.dissipation_physical + adv.dissipation_numerical;
    cum_phys += adv.dissipation_physical;
    traj.total_newton_iters += adv.newton_iters;
    traj.retries += adv.retries;
    traj.steps = k;
    iters_since_record += adv.newton_iters;
    worst_residual = std::max(worst_residual, adv.residual);

    EnergyRecord rec = total_energy(state, spec);
    const bool floor_hit = e0 > 0.0 && rec.total < kEnergyFloor * e0;
    if (should_record(spec, k, total) || floor_hit) {
      rec.cumulative_dissipation = cum_total;
      rec.cumulative_physical = cum_phys;
      rec.balance_residual = rec.total - e0 + cum_total;
      Sample s;
      s.energy = rec;
      s.cross_term = inner_h(state.w, state.u, spec.grid.h);
      s.newton_iters = iters_since_record;
      s.newton_residual = worst_residual;
      traj.samples.push_back(s);
      iters_since_record = 0;
      worst_residual = 0.0;
      const bool last = k == total || floor_hit;
      if (!last && want_snapshot(spec, traj.samples.size() - 1)) push_snapshot(traj, state);
    }
    if (floor_hit) {
      traj.status = RunStatus::energy_floor;
      break;
    }
  }
  if (traj.samples.size() > 1) push_snapshot(traj, state);
  return traj;
}

namespace {

struct OdeState {
  Vec u;
  Vec w;
  double dcum{0.0};
};

OdeState rhs(double t, const OdeState& y, const ProblemSpec& spec) {
  const auto& ex = spec.exponents;
  const Vec v = p_invert(y.w, ex.ell, spec.eps_reg);
  const Vec au = a_apply(y.u, ex.q, spec.a, spec.grid.h, spec.eps_reg);
  const Vec b = b_apply(t, v, spec);
  OdeState f;
  f.u = v;
  f.w.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f.w[i] = -au[i] - b[i];
  f.dcum = inner_h(b, v, spec.grid.h);
  return f;
}

OdeState axpy(const OdeState& y, double a, const OdeState& k) {
  OdeState out = y;
  for (std::size_t i = 0; i < y.u.size(); ++i) {
    out.u[i] += a * k.u[i];
    out.w[i] += a * k.w[i];
  }
  out.dcum += a * k.dcum;
  return out;
}

void rk4_step(OdeState& y, double t, double dt, const ProblemSpec& spec) {
  const OdeState k1 = rhs(t, y, spec);
  const OdeState k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1), spec);
  const OdeState k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2), spec);
  const OdeState k4 = rhs(t + dt, axpy(y, dt, k3), spec);
  for (std::size_t i = 0; i < y.u.size(); ++i) {
    y.u[i] += dt / 6.0 * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
    y.w[i] += dt / 6.0 * (k1.w[i] + 2.0 * k2.w[i] + 2.0 * k3.w[i] + k4.w[i]);
  }
  y.dcum += dt / 6.0 * (k1.dcum + 2.0 * k2.dcum + 2.0 * k3.dcum + k4.dcum);
}

}  // namespace

Trajectory oracle_run(const ProblemSpec& spec, int refinement) {
  if (refinement < 10) throw std::invalid_argument("oracle_run: refinement must be at least 10");
  spec.validate();
  Trajectory traj;
  traj.spec = spec;

  State state = initial_state(spec);
  Sample s0;
  s0.energy = total_energy(state, spec);
  s0.cross_term = inner_h(state.w, state.u, spec.grid.h);
  traj.samples.push_back(s0);
  push_snapshot(traj, state);
  const double e0 = s0.energy.total;

  OdeState y{state.u, state.w, 0.0};
  const std::size_t total = step_count(spec);
  for (std::size_t k = 1; k <= total; ++k) {
    const double t0 = step_time(spec, k - 1, total);
    const double t1 = step_time(spec, k, total);
    const double fine = (t1 - t0) / refinement;
    for (int j = 0; j < refinement; ++j) rk4_step(y, t0 + j * fine, fine, spec);
    if (!all_finite(y.u) || !all_finite(y.w)) {
      throw OracleDiverged("explicit oracle produced non-finite values at t = " + std::to_string(t1) +
                           "; reduce dt * n^2 or increase the refinement");
    }
    traj.steps = k;
    if (!should_record(spec, k, total)) continue;
    state.t = t1;
    state.u = y.u;
    state.w = y.w;
    EnergyRecord rec = total_energy(state, spec);
    rec.cumulative_dissipation = y.dcum;
    rec.cumulative_physical = y.dcum;
    rec.balance_residual = rec.total - e0 + y.dcum;
    Sample s;
    s.energy = rec;
    s.cross_term = inner_h(state.w, state.u, spec.grid.h);
    traj.samples.push_back(s);
  }
  if (traj.samples.size() > 1) push_snapshot(traj, state);
  return traj;
}

}  // namespace decaylab
