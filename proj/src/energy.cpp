#include "decaylab/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "decaylab/operators.hpp"

namespace decaylab {

EnergyRecord total_energy(const State& state, const ProblemSpec& spec) {
  const auto& ex = spec.exponents;
  const double h = spec.grid.h;
  const Vec v = p_invert(state.w, ex.ell, spec.eps_reg);
  EnergyRecord rec;
  rec.t = state.t;
  rec.kinetic = p_star(v, ex.ell, h, spec.eps_reg);
  rec.potential = a_potential(state.u, ex.q, spec.a, h, spec.eps_reg);
  rec.total = rec.kinetic + rec.potential;
  return rec;
}

namespace {

bool same_run_config(const ProblemSpec& a, const ProblemSpec& b) {
  return a.grid.n == b.grid.n && a.grid.length == b.grid.length && a.exponents.ell == b.exponents.ell &&
         a.exponents.m == b.exponents.m && a.exponents.q == b.exponents.q && a.a == b.a &&
         a.damping.b0 == b.damping.b0 && a.damping.temporal_sigma == b.damping.temporal_sigma &&
         a.dt == b.dt && a.eps_reg == b.eps_reg;
}

}  // namespace

BalanceReport balance_residual(const Trajectory& traj, const ProblemSpec& spec) {
  if (!same_run_config(traj.spec, spec))
    throw std::invalid_argument("balance_residual: trajectory was produced by a different configuration");
  BalanceReport rep;
  if (traj.samples.empty()) return rep;
  const double e0 = traj.samples.front().energy.total;
  rep.series.reserve(traj.samples.size());
  rep.physical_series.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double r = s.energy.total - e0 + s.energy.cumulative_dissipation;
    rep.series.push_back(r);
    rep.physical_series.push_back(s.energy.total - e0 + s.energy.cumulative_physical);
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
  }
  return rep;
}

MonotoneReport check_monotone(std::span<const double> energies, double rel_tol) {
  MonotoneReport rep;
  if (energies.empty()) return rep;
  const double e0 = energies.front();
  const double slack = rel_tol * e0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (k > 0 && energies[k] > energies[k - 1] + slack) rep.increases.push_back(k);
    if (!(energies[k] >= 0.0) || energies[k] > e0 * (1.0 + rel_tol)) rep.out_of_range.push_back(k);
  }
  return rep;
}

MonotoneReport check_monotone(const Trajectory& traj, double rel_tol) {
  std::vector<double> e;
  e.reserve(traj.samples.size());
  for (const auto& s : traj.samples) e.push_back(s.energy.total);
  return check_monotone(e, rel_tol);
}

}  // namespace decaylab
