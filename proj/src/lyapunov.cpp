#include "decaylab/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "decaylab/energy.hpp"
#include "decaylab/operators.hpp"

namespace decaylab {

ResolvedWeights resolve_weights(const WeightProfiles& weights, const PowerProfile& delta_emp,
                                const PowerProfile& eta_emp, const PowerProfile& j_emp) {
  ResolvedWeights r;
  r.lambda = weights.lambda;
  r.alpha = weights.alpha;
  r.delta = weights.delta.empirical ? delta_emp : weights.delta.profile;
  r.eta = weights.eta.empirical ? eta_emp : weights.eta.profile;
  r.j = weights.j.empirical ? j_emp : weights.j.profile;
  return r;
}

double LyapunovParams::s_g() const { return r + 1.0 / q + (ell - 1.0) / ell; }

double r_exponent(double m, double ell) {
  if (!(ell > 1.0)) throw std::invalid_argument("r_exponent: ell must exceed 1");
  if (m < ell) throw std::invalid_argument("r_exponent: requires m >= ell");
  return (m - ell) / ell;
}

double linked_nu(double mu, const Exponents& ex, double c4) {
  return mu * c4 * ex.q * (ex.m - ex.ell) / (ex.q * (ex.m - 1.0) + ex.ell);
}

LyapunovParams make_lyapunov_params(const Exponents& ex, double mu, double c4) {
  LyapunovParams p;
  p.mu = mu;
  p.nu = linked_nu(mu, ex, c4);
  p.r = r_exponent(ex.m, ex.ell);
  p.ell = ex.ell;
  p.q = ex.q;
  p.c4 = c4;
  return p;
}

double energy_power(double energy, double r) {
  if (r == 0.0) return 1.0;
  if (energy <= 0.0) return 0.0;
  return std::pow(energy, r);
}

double cross_term(const State& state, const ProblemSpec& spec) { return inner_h(state.w, state.u, spec.grid.h); }

double h_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w) {
  return w.lambda(t) * energy + p.mu * w.alpha(t) * energy_power(energy, p.r) * cross;
}

double g_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w) {
  const double extra = p.nu * w.alpha(t) * std::pow(w.delta(t), 1.0 / p.ell) * energy_power(energy, p.s_g());
  return h_value(energy, cross, t, p, w) + extra;
}

double f_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w) {
  const double ratio = w.alpha(t) / w.lambda(t);
  double f = energy;
  if (p.mu != 0.0) f += p.mu * ratio * energy_power(energy, p.r) * cross;
  if (p.nu != 0.0) f += p.nu * ratio * std::pow(w.delta(t), 1.0 / p.ell) * energy_power(energy, p.s_g());
  return f;
}

double h_functional(const State& state, const ProblemSpec& spec, const LyapunovParams& p,
                    const ResolvedWeights& w) {
  return h_value(total_energy(state, spec).total, cross_term(state, spec), state.t, p, w);
}

double g_functional(const State& state, const ProblemSpec& spec, const LyapunovParams& p,
                    const ResolvedWeights& w) {
  return g_value(total_energy(state, spec).total, cross_term(state, spec), state.t, p, w);
}

namespace {

std::size_t positive_window(const Trajectory& traj) {
  std::size_t k = 0;
  while (k < traj.samples.size() && traj.energy(k) > 0.0) ++k;
  return k;
}

}  // namespace

EquivalenceReport equivalence_bounds(const Trajectory& traj, const LyapunovParams& p, const ResolvedWeights& w) {
  const std::size_t window = positive_window(traj);
  if (window == 0) throw std::invalid_argument("equivalence_bounds: no samples with positive energy");

  EquivalenceReport rep;
  rep.window = window;
  rep.k1_emp = std::numeric_limits<double>::infinity();
  rep.k2_emp = -std::numeric_limits<double>::infinity();
  const double e0 = traj.energy(0);
  const double s_g = p.s_g();
  const double cross_exp = (p.ell - 1.0) / p.ell + 1.0 / p.q;
  rep.c_star = std::pow(e0, s_g - 1.0);

  double max_ratio = 0.0;
  double max_delta_root = 0.0;
  std::vector<double> ratios(window);
  for (std::size_t k = 0; k < window; ++k) {
    const auto& s = traj.samples[k];
    const double e = s.energy.total;
    const double t = s.energy.t;
    ratios[k] = f_value(e, s.cross_term, t, p, w) / e;
    rep.k1_emp = std::min(rep.k1_emp, ratios[k]);
    rep.k2_emp = std::max(rep.k2_emp, ratios[k]);
    rep.c1_emp = std::max(rep.c1_emp, std::abs(s.cross_term) / std::pow(e, cross_exp));
    max_ratio = std::max(max_ratio, w.alpha(t) / w.lambda(t));
    max_delta_root = std::max(max_delta_root, std::pow(w.delta(t), 1.0 / p.ell));
  }
  const double spread = (p.mu * rep.c1_emp + p.nu * max_delta_root) * max_ratio * rep.c_star;
  rep.k1 = 1.0 - spread;
  rep.k2 = 1.0 + spread;
  constexpr double slack = 1e-12;
  for (std::size_t k = 0; k < window; ++k) {
    if (ratios[k] < rep.k1 - slack || ratios[k] > rep.k2 + slack) rep.violations.push_back(k);
  }
  rep.passed = rep.k1_emp > 0.0 && std::isfinite(rep.k2_emp) && rep.k1 > 0.0 && rep.violations.empty();
  return rep;
}

GMonotoneReport check_g_monotone(const Trajectory& traj, const LyapunovParams& p, const ResolvedWeights& w,
                                 double rel_tol) {
  GMonotoneReport rep;
  const std::size_t window = positive_window(traj);
  if (window == 0) {
    rep.k4_emp = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  std::vector<double> f(window);
  for (std::size_t k = 0; k < window; ++k) {
    const auto& s = traj.samples[k];
    f[k] = f_value(s.energy.total, s.cross_term, s.energy.t, p, w);
  }
  const double slack = rel_tol * f[0];
  const double power = traj.spec.exponents.m / traj.spec.exponents.ell;
  double k4 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < window; ++k) {
    if (f[k + 1] > f[k] + slack) rep.violations.push_back(k + 1);
    if (f[k + 1] < f[k] && f[k] > 0.0) {
      const double t = traj.t(k);
      const double dt = traj.t(k + 1) - t;
      const double rate = -(f[k + 1] - f[k]) / (dt * (w.alpha(t) / w.lambda(t)) * std::pow(f[k], power));
      k4 = std::min(k4, rate);
    }
  }
  rep.k4_emp = std::isfinite(k4) ? k4 : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::vector<double> cross_term_rate(const Trajectory& traj) {
  std::vector<double> rate(traj.samples.size(), 0.0);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double dt = traj.t(k) - traj.t(k - 1);
    rate[k] = (traj.samples[k].cross_term - traj.samples[k - 1].cross_term) / dt;
  }
  return rate;
}

std::vector<double> mu_scan_grid() {
  std::vector<double> grid;
  for (int e = 1; e <= 6; ++e) {
    const double base = std::pow(10.0, -e);
    grid.push_back(base);
    if (e < 6) grid.push_back(0.3 * base);
  }
  return grid;
}

TuneResult tune_mu(const Trajectory& traj, const Exponents& ex, const ResolvedWeights& w, double c4) {
  TuneResult result;
  for (double mu : mu_scan_grid()) {
    const LyapunovParams p = make_lyapunov_params(ex, mu, c4);
    EquivalenceReport eq = equivalence_bounds(traj, p, w);
    GMonotoneReport mono = check_g_monotone(traj, p, w);
    TuneCandidate cand;
    cand.mu = p.mu;
    cand.nu = p.nu;
    cand.k1_emp = eq.k1_emp;
    cand.equivalence_violations = eq.violations.size();
    cand.monotone_violations = mono.violations.size();
    cand.passed = eq.passed && eq.k1_emp >= 0.5 && mono.passed();
    result.candidates.push_back(cand);
    if (cand.passed) {
      result.found = true;
      result.params = p;
      result.equivalence = std::move(eq);
      result.monotone = std::move(mono);
      break;
    }
  }
  return result;
}

}  // namespace decaylab
