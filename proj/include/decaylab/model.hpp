#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace decaylab {

/// Raised for any configuration or invariant violation. The message names
/// the offending key or constraint.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Vec = std::vector<double>;

/**
 * Uniform 1-D grid on (0, length) with homogeneous Dirichlet ends.
 * Only the n interior nodes x_i = i*h, i = 1..n, carry unknowns.
 */
struct Grid {
  std::size_t n{0};
  double length{1.0};
  double h{0.0};

  double node(std::size_t i) const { return static_cast<double>(i + 1) * h; }
  Vec nodes() const;
};

Grid build_grid(std::size_t n, double length);

/// Exponents of the inertia (ell), damping (m) and diffusion (q) terms.
struct Exponents {
  double ell{2.0};
  double m{2.0};
  double q{2.0};
  double p_a1{1.0};

  double ell_conj() const { return ell / (ell - 1.0); }
  double m_conj() const { return m / (m - 1.0); }

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

/// c * (1 + t)^theta, c > 0.
struct PowerProfile {
  double c{1.0};
  double theta{0.0};

  double operator()(double t) const;
  /// Closed-form time derivative.
  double derivative(double t) const;
  bool is_constant() const { return theta == 0.0; }
};

double weight_eval(const PowerProfile& profile, double t);

/// A weight that is either given explicitly or estimated from samples.
struct WeightSlot {
  bool empirical{true};
  PowerProfile profile{};
};

struct WeightProfiles {
  PowerProfile lambda{};
  PowerProfile alpha{};
  WeightSlot delta{};
  WeightSlot eta{};
  WeightSlot j{};
};

enum class SpatialShape { uniform, bump };

/// b(t, x) = b0 * s(x) * (1 + t)^sigma.
struct DampingProfile {
  double b0{1.0};
  SpatialShape shape{SpatialShape::uniform};
  double bump_center{0.5};
  double bump_width{0.5};
  double temporal_sigma{0.0};

  double spatial(double x) const;
  double operator()(double t, double x) const;
  /// sup_x b(t, x)
  double sup(double t) const;
};

enum class InitialShape { zero, sine, sine_mode2, bump };

struct InitialProfile {
  InitialShape psi{InitialShape::sine};
  InitialShape phi{InitialShape::zero};
  double amplitude{1.0};
};

double initial_shape_value(InitialShape shape, double x, double length);

struct NewtonSettings {
  double tol{1e-12};
  int max_iter{50};
  double backtrack{0.5};
  int max_halvings{20};
};

struct ProblemSpec {
  Grid grid{build_grid(200, 1.0)};
  Exponents exponents{};
  double a{1.0};
  DampingProfile damping{};
  WeightProfiles weights{};
  InitialProfile initial{};
  double dt{1e-3};
  double t_end{20.0};
  double eps_reg{1e-8};
  NewtonSettings newton{};
  /// Keep every k-th step in the trajectory (the final step is always kept).
  std::size_t record_every{1};
  /// Keep a full state snapshot every k-th recorded sample; 0 keeps only
  /// the first and last.
  std::size_t snapshot_every{0};

  void validate() const;
};

struct State {
  double t{0.0};
  Vec u;
  Vec w;
};

State initial_state(const ProblemSpec& spec);

/// Scalar diagnostics of one energy evaluation.
struct EnergyRecord {
  double t{0.0};
  double total{0.0};
  double kinetic{0.0};
  double potential{0.0};
  /// Scheme-consistent sum of per-step dissipation (physical + numerical).
  double cumulative_dissipation{0.0};
  /// Sum of dt * <B, v+>_h only.
  double cumulative_physical{0.0};
  double balance_residual{0.0};
};

struct Sample {
  EnergyRecord energy;
  double cross_term{0.0};
  int newton_iters{0};
  double newton_residual{0.0};
};

struct Snapshot {
  std::size_t sample_index{0};
  State state;
};

enum class RunStatus { completed, energy_floor };

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Snapshot> snapshots;
  ProblemSpec spec;
  RunStatus status{RunStatus::completed};
  long total_newton_iters{0};
  long retries{0};
  std::size_t steps{0};

  double t(std::size_t k) const { return samples[k].energy.t; }
  double energy(std::size_t k) const { return samples[k].energy.total; }
  const State& final_state() const { return snapshots.back().state; }
};

std::string to_string(RunStatus status);

}  // namespace decaylab
