#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decaylab/energy.hpp"
#include "decaylab/operators.hpp"
#include "decaylab/solver.hpp"
#include "support.hpp"

using namespace decaylab;
using std::numbers::pi;

TEST_CASE("total_energy examples") {
  ProblemSpec spec;
  State zero{0.0, Vec(spec.grid.n, 0.0), Vec(spec.grid.n, 0.0)};
  CHECK(total_energy(zero, spec).total == 0.0);

  const EnergyRecord e = total_energy(initial_state(spec), spec);
  CHECK(testing::rel_diff(e.total, pi * pi / 4.0) <= 1e-3);
  CHECK(e.kinetic == 0.0);
  CHECK(e.total == e.kinetic + e.potential);

  testing::Rng rng(31);
  State s{0.0, rng.vector(spec.grid.n), rng.vector(spec.grid.n)};
  const EnergyRecord r = total_energy(s, spec);
  CHECK(testing::rel_diff(r.kinetic, 0.5 * norm_pow_h(s.w, 2.0, spec.grid.h)) <= 1e-12);
}

TEST_CASE("single-step balance against an independent recomputation") {
  testing::Rng rng(32);
  for (double ell : {1.5, 2.0, 3.0}) {
    for (double m : {ell, 4.0}) {
      ProblemSpec spec = testing::small_spec(24, ell, m, 1.5);
      State s{0.0, rng.vector(24), p_apply(rng.vector(24), ell, spec.eps_reg)};
      const double e_before = total_energy(s, spec).total;
      const StepOutcome o = implicit_step(s, 1e-3, spec);
      REQUIRE(o.accepted);
      const double h = spec.grid.h;
      const double eps = spec.eps_reg;
      // both sides rebuilt from the states alone
      const Vec v_old = p_invert(s.w, ell, eps);
      const Vec v_new = p_invert(o.state.w, ell, eps);
      Vec dw(24);
      for (std::size_t i = 0; i < 24; ++i) dw[i] = s.w[i] - o.state.w[i];
      Vec du(24);
      for (std::size_t i = 0; i < 24; ++i) du[i] = s.u[i] - o.state.u[i];
      const double kinetic = p_star(v_old, ell, h, eps) - p_star(v_new, ell, h, eps) - inner_h(v_new, dw, h);
      const double potential = a_potential(s.u, 1.5, 1.0, h, eps) - a_potential(o.state.u, 1.5, 1.0, h, eps) -
                               inner_h(a_apply(o.state.u, 1.5, 1.0, h, eps), du, h);
      const double physical = 1e-3 * dissipation(1e-3, v_new, spec);
      CHECK(kinetic >= -1e-14 * e_before);
      CHECK(potential >= -1e-14 * e_before);
      const double e_after = total_energy(o.state, spec).total;
      CHECK(std::abs(e_after - e_before + physical + kinetic + potential) <= 1e-9 * e_before);
      CHECK(std::abs(o.dissipation() - (physical + kinetic + potential)) <= 1e-9 * e_before);
      CHECK(e_after + o.dissipation() <= e_before + 1e-10 * e_before);
    }
  }
}

TEST_CASE("balance_residual over runs") {
  ProblemSpec spec = testing::small_spec(32, 2.0, 3.0, 2.0);
  spec.t_end = 2.0;
  const Trajectory traj = run_simulation(spec);
  const BalanceReport rep = balance_residual(traj, spec);
  CHECK(rep.series.size() == traj.samples.size());
  CHECK(rep.max_abs <= 1e-8 * traj.energy(0));

  double prev = 0.0;
  for (const auto& s : traj.samples) {
    CHECK(s.energy.cumulative_dissipation >= prev);
    CHECK(s.energy.cumulative_dissipation <= traj.energy(0) * (1.0 + 1e-10));
    CHECK(s.energy.kinetic >= 0.0);
    CHECK(s.energy.potential >= 0.0);
    CHECK(s.energy.kinetic <= traj.energy(0) * (1.0 + 1e-12));
    CHECK(s.energy.potential <= traj.energy(0) * (1.0 + 1e-12));
    prev = s.energy.cumulative_dissipation;
  }

  ProblemSpec other = spec;
  other.exponents.m = 4.0;
  CHECK_THROWS_AS(balance_residual(traj, other), std::invalid_argument);
}

TEST_CASE("zero initial data keeps a zero residual") {
  ProblemSpec spec = testing::small_spec(16, 2.0, 3.0, 2.0);
  spec.initial.psi = InitialShape::zero;
  spec.t_end = 0.1;
  const Trajectory traj = run_simulation(spec);
  for (double r : balance_residual(traj, spec).series) CHECK(r == 0.0);
  CHECK(check_monotone(traj).passed());
}

TEST_CASE("undamped runs report E_k - E_0 as the physical series") {
  ProblemSpec spec = testing::small_spec(32, 2.0, 2.0, 2.0);
  spec.damping.b0 = 0.0;
  spec.t_end = 1.0;
  const Trajectory traj = run_simulation(spec);
  const BalanceReport rep = balance_residual(traj, spec);
  for (std::size_t k = 0; k < traj.samples.size(); ++k)
    CHECK(rep.physical_series[k] == traj.energy(k) - traj.energy(0));
  CHECK(rep.physical_series.back() < 0.0);
  CHECK(rep.max_abs <= 1e-8 * traj.energy(0));
}

TEST_CASE("check_monotone detector") {
  const std::vector<double> zeros(10, 0.0);
  CHECK(check_monotone(zeros).passed());

  std::vector<double> e{5.0, 4.0, 3.0, 2.0, 1.0, 0.5};
  CHECK(check_monotone(e).passed());
  e[3] = 3.5;
  const MonotoneReport r = check_monotone(e);
  CHECK(r.increases == std::vector<std::size_t>{3});
  CHECK(r.out_of_range.empty());

  std::vector<double> tiny{1.0, 1.0 + 5e-13, 0.9};
  CHECK(check_monotone(tiny).passed());
  std::vector<double> above{1.0, 1.0 + 1e-9};
  CHECK(check_monotone(above).out_of_range == std::vector<std::size_t>{1});
  std::vector<double> negative{1.0, -1e-3};
  CHECK(check_monotone(negative).out_of_range == std::vector<std::size_t>{1});
}

TEST_CASE("perturbed trajectory is flagged at the perturbed index") {
  ProblemSpec spec = testing::small_spec(16, 2.0, 2.0, 2.0);
  spec.t_end = 0.5;
  Trajectory traj = run_simulation(spec);
  REQUIRE(check_monotone(traj).passed());
  traj.samples[137].energy.total = traj.energy(136) + 1e-6;
  const MonotoneReport r = check_monotone(traj);
  CHECK(r.increases == std::vector<std::size_t>{137});
}
