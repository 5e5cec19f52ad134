#include <doctest.h>

#include <cmath>

#include "decaylab/energy.hpp"
#include "decaylab/lyapunov.hpp"
#include "decaylab/operators.hpp"
#include "decaylab/solver.hpp"
#include "support.hpp"

using namespace decaylab;

namespace {

ResolvedWeights unit_weights() { return ResolvedWeights{}; }

Trajectory canonical_run(double ell, double m, double q, double t_end = 10.0) {
  ProblemSpec spec = testing::small_spec(64, ell, m, q);
  spec.t_end = t_end;
  spec.record_every = 10;
  return run_simulation(spec);
}

}  // namespace

TEST_CASE("r exponent") {
  CHECK(r_exponent(4.0, 2.0) == 1.0);
  CHECK(r_exponent(2.0, 2.0) == 0.0);
  CHECK(r_exponent(3.0, 2.0) == 0.5);
  CHECK_THROWS_AS(r_exponent(1.5, 2.0), std::invalid_argument);
}

TEST_CASE("s_g is at least one for admissible exponents") {
  testing::Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    Exponents ex;
    ex.ell = rng.uniform(1.01, 5.0);
    ex.m = ex.ell + rng.uniform(0.0, 4.0);
    ex.q = rng.uniform(1.001, ex.ell);
    REQUIRE_NOTHROW(ex.validate());
    CHECK(make_lyapunov_params(ex, 0.01).s_g() >= 1.0 - 1e-15);
  }
}

TEST_CASE("nu linkage") {
  Exponents ex{2.0, 2.0, 2.0, 1.0};
  CHECK(linked_nu(0.1, ex, 1.0) == 0.0);
  ex.m = 4.0;
  // q (m - ell) / (q (m - 1) + ell) = 2 * 2 / (6 + 2)
  CHECK(linked_nu(0.1, ex, 1.0) == doctest::Approx(0.05));
  CHECK(linked_nu(0.1, ex, 3.0) == doctest::Approx(0.15));
}

TEST_CASE("energy_power continuity convention") {
  CHECK(energy_power(0.0, 0.5) == 0.0);
  CHECK(energy_power(0.0, 0.0) == 1.0);
  CHECK(energy_power(4.0, 0.5) == 2.0);
}

TEST_CASE("cross term") {
  testing::Rng rng(52);
  ProblemSpec spec = testing::small_spec(30, 2.0, 2.0, 2.0);
  State s{0.0, rng.vector(30), Vec(30, 0.0)};
  CHECK(cross_term(s, spec) == 0.0);
  s.w = rng.vector(30);
  CHECK(cross_term(s, spec) == doctest::Approx(inner_h(s.w, s.u, spec.grid.h)));

  for (double ell : {1.5, 2.0, 3.0}) {
    for (int rep = 0; rep < 100; ++rep) {
      State r{0.0, rng.vector(30, -3, 3), rng.vector(30, -3, 3)};
      const double h = spec.grid.h;
      const double bound = std::pow(norm_pow_h(r.w, ell / (ell - 1.0), h), (ell - 1.0) / ell) *
                           std::pow(norm_pow_h(r.u, ell, h), 1.0 / ell);
      CHECK(std::abs(cross_term(r, spec)) <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("H and G functionals") {
  testing::Rng rng(53);
  ProblemSpec spec = testing::small_spec(24, 2.0, 3.0, 2.0);
  const State zero{0.0, Vec(24, 0.0), Vec(24, 0.0)};
  ResolvedWeights w;
  w.lambda = {2.0, 0.5};
  w.alpha = {1.5, -0.3};
  w.delta = {0.8, 0.2};
  const Exponents ex = spec.exponents;

  LyapunovParams p = make_lyapunov_params(ex, 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    State s{rng.uniform(0, 10), rng.vector(24), rng.vector(24)};
    const double e = total_energy(s, spec).total;
    CHECK(h_functional(s, spec, p, w) == w.lambda(s.t) * e);
  }
  p = make_lyapunov_params(ex, 0.05);
  CHECK(h_functional(zero, spec, p, w) == 0.0);
  CHECK(g_functional(zero, spec, p, w) == 0.0);

  for (int rep = 0; rep < 100; ++rep) {
    State s{rng.uniform(0, 10), rng.vector(24), rng.vector(24)};
    const double e = total_energy(s, spec).total;
    const double c = cross_term(s, spec);
    const double t = s.t;
    const double direct = h_functional(s, spec, p, w);
    const double rearranged = w.lambda(t) * e * (1.0 + p.mu * (w.alpha(t) / w.lambda(t)) * std::pow(e, p.r - 1.0) * c);
    CHECK(testing::rel_diff(direct, rearranged) <= 1e-12);

    LyapunovParams no_nu = p;
    no_nu.nu = 0.0;
    CHECK(g_functional(s, spec, no_nu, w) == h_functional(s, spec, no_nu, w));
    LyapunovParams more = p;
    more.nu = 2.0 * p.nu + 0.01;
    CHECK(g_functional(s, spec, more, w) > g_functional(s, spec, p, w));
    CHECK(testing::rel_diff(f_value(e, c, t, p, w), g_functional(s, spec, p, w) / w.lambda(t)) <= 1e-12);
  }
}

TEST_CASE("equivalence with mu = nu = 0 is exact") {
  const Trajectory traj = canonical_run(2.0, 3.0, 2.0);
  const LyapunovParams p = make_lyapunov_params(traj.spec.exponents, 0.0);
  const EquivalenceReport rep = equivalence_bounds(traj, p, unit_weights());
  CHECK(rep.k1_emp == 1.0);
  CHECK(rep.k2_emp == 1.0);
  CHECK(rep.passed);
  const GMonotoneReport mono = check_g_monotone(traj, p, unit_weights());
  CHECK(mono.passed());
}

TEST_CASE("equivalence for mu = nu = 0.01 on the canonical run") {
  const Trajectory traj = canonical_run(2.0, 3.0, 2.0);
  LyapunovParams p = make_lyapunov_params(traj.spec.exponents, 0.01);
  p.nu = 0.01;
  const EquivalenceReport rep = equivalence_bounds(traj, p, unit_weights());
  CHECK(rep.k1_emp >= 0.8);
  CHECK(rep.k1_emp <= rep.k2_emp);
  CHECK(rep.k2_emp <= 1.2);
  CHECK(rep.passed);
  CHECK(rep.window == traj.samples.size());
}

TEST_CASE("rest trajectory has an empty window") {
  ProblemSpec spec = testing::small_spec(16, 2.0, 2.0, 2.0);
  spec.initial.psi = InitialShape::zero;
  spec.t_end = 0.01;
  const Trajectory traj = run_simulation(spec);
  CHECK_THROWS_AS(equivalence_bounds(traj, make_lyapunov_params(spec.exponents, 0.01), unit_weights()),
                  std::invalid_argument);
}

TEST_CASE("F monotonicity") {
  const Trajectory linear = canonical_run(2.0, 2.0, 2.0);
  const LyapunovParams p = make_lyapunov_params(linear.spec.exponents, 0.01);
  const GMonotoneReport rep = check_g_monotone(linear, p, unit_weights());
  CHECK(rep.passed());
  CHECK(rep.k4_emp > 0.0);

  // the smallness hypothesis fails; only the report is exercised
  const GMonotoneReport huge = check_g_monotone(linear, make_lyapunov_params(linear.spec.exponents, 1e3), unit_weights());
  MESSAGE("mu = 1e3 violations: " << huge.violations.size());
}

TEST_CASE("tune_mu") {
  const Trajectory linear = canonical_run(2.0, 2.0, 2.0);
  const TuneResult tr = tune_mu(linear, linear.spec.exponents, unit_weights());
  REQUIRE(tr.found);
  CHECK(tr.params.mu >= 1e-4);
  CHECK(tr.params.nu == 0.0);
  CHECK(tr.equivalence->k1_emp >= 0.5);
  CHECK(tr.monotone->passed());
  CHECK(mu_scan_grid().size() == 11);
  CHECK(mu_scan_grid().front() == 0.1);
  CHECK(mu_scan_grid().back() == doctest::Approx(1e-6));

  // an energy that grows cannot be made monotone by any mu
  Trajectory rising = linear;
  for (std::size_t k = 0; k < rising.samples.size(); ++k) {
    rising.samples[k].energy.total = 1.0 + 0.01 * static_cast<double>(k);
    rising.samples[k].cross_term = 0.0;
  }
  const TuneResult bad = tune_mu(rising, rising.spec.exponents, unit_weights());
  CHECK_FALSE(bad.found);
  CHECK(bad.candidates.size() == mu_scan_grid().size());
}

TEST_CASE("cross term rate") {
  const Trajectory traj = canonical_run(2.0, 3.0, 2.0, 1.0);
  const auto rate = cross_term_rate(traj);
  REQUIRE(rate.size() == traj.samples.size());
  CHECK(rate[0] == 0.0);
  const double expect = (traj.samples[3].cross_term - traj.samples[2].cross_term) / (traj.t(3) - traj.t(2));
  CHECK(rate[3] == doctest::Approx(expect));
}
