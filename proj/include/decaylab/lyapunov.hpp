#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "decaylab/model.hpp"

namespace decaylab {

/// Weight profiles with every empirical slot replaced by a measured profile.
struct ResolvedWeights {
  PowerProfile lambda{};
  PowerProfile alpha{};
  PowerProfile delta{};
  PowerProfile eta{};
  PowerProfile j{};
};

/// Uses the explicit profile where given, the fallback otherwise.
ResolvedWeights resolve_weights(const WeightProfiles& weights, const PowerProfile& delta_emp,
                                const PowerProfile& eta_emp, const PowerProfile& j_emp);

struct LyapunovParams {
  double mu{0.0};
  double nu{0.0};
  double r{0.0};
  double ell{2.0};
  double q{2.0};
  double c4{1.0};

  double s_g() const;
};

double r_exponent(double m, double ell);

/// nu = mu * c4 * q (m - ell) / (q (m - 1) + ell)
double linked_nu(double mu, const Exponents& ex, double c4);

/// mu and the linked nu for the given exponents.
LyapunovParams make_lyapunov_params(const Exponents& ex, double mu, double c4 = 1.0);

/// E^r with E^0 = 1 and 0^r = 0 for r > 0.
double energy_power(double energy, double r);

/// <w, u>_h
double cross_term(const State& state, const ProblemSpec& spec);

// Scalar forms used on recorded trajectories.
double h_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w);
double g_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w);
/// F = G / lambda, evaluated in scaled form so mu = nu = 0 returns E exactly.
double f_value(double energy, double cross, double t, const LyapunovParams& p, const ResolvedWeights& w);

double h_functional(const State& state, const ProblemSpec& spec, const LyapunovParams& p,
                    const ResolvedWeights& w);
double g_functional(const State& state, const ProblemSpec& spec, const LyapunovParams& p,
                    const ResolvedWeights& w);

struct EquivalenceReport {
  double k1_emp{0.0};
  double k2_emp{0.0};
  /// max |cross| / E^(1/ell' + 1/q) over the window
  double c1_emp{0.0};
  /// E_0^(s_g - 1)
  double c_star{0.0};
  /// Lemma-form constants 1 -/+ (mu c1 + nu delta^(1/ell)) max(alpha/lambda) c_star
  double k1{0.0};
  double k2{0.0};
  std::size_t window{0};
  std::vector<std::size_t> violations;
  bool passed{false};
};

/// Window is the leading run of samples with E > 0. Throws std::invalid_argument
/// when it is empty.
EquivalenceReport equivalence_bounds(const Trajectory& traj, const LyapunovParams& p, const ResolvedWeights& w);

struct GMonotoneReport {
  std::vector<std::size_t> violations;  // k+1 with F_{k+1} > F_k + 1e-12 F_0
  /// min over strictly decreasing steps of -dF / (dt (alpha/lambda) F^(m/ell)); NaN if none
  double k4_emp{0.0};
  bool passed() const { return violations.empty(); }
};

GMonotoneReport check_g_monotone(const Trajectory& traj, const LyapunovParams& p, const ResolvedWeights& w,
                                 double rel_tol = 1e-12);

/// Discrete difference quotient of <P(u_t), u>_h between consecutive samples
/// (first entry 0).
std::vector<double> cross_term_rate(const Trajectory& traj);

struct TuneCandidate {
  double mu{0.0};
  double nu{0.0};
  double k1_emp{0.0};
  std::size_t equivalence_violations{0};
  std::size_t monotone_violations{0};
  bool passed{false};
};

struct TuneResult {
  bool found{false};
  LyapunovParams params{};
  std::optional<EquivalenceReport> equivalence;
  std::optional<GMonotoneReport> monotone;
  std::vector<TuneCandidate> candidates;
};

/// The mu grid scanned by tune_mu: 1e-1, 3e-2, 1e-2, ..., 1e-6.
std::vector<double> mu_scan_grid();

/// Largest mu on the scan grid (with linked nu) whose equivalence check
/// passes with k1_emp >= 0.5 and whose F = G/lambda has no increases. The
/// trajectory does not depend on mu, so one run serves every candidate.
TuneResult tune_mu(const Trajectory& traj, const Exponents& ex, const ResolvedWeights& w, double c4 = 1.0);

}  // namespace decaylab
