#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "decaylab/model.hpp"
#include "decaylab/operators.hpp"

namespace decaylab {

/// Newton failed on a step even after the dt-halving retries.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(std::size_t step, double residual)
      : std::runtime_error(message(step, residual)),
        step_(step),
        residual_(residual) {}

  std::size_t step() const { return step_; }
  double residual() const { return residual_; }

private:
  static std::string message(std::size_t step, double residual);

  std::size_t step_;
  double residual_;
};

/// The explicit oracle produced a non-finite value.
class OracleDiverged : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StepOutcome {
  State state;
  int newton_iters{0};
  /// ||R||_inf relative to the step scale ||w||_inf + dt ||A_h u||_inf.
  double residual_norm{0.0};
  /// dt <B(t+dt, v+), v+>_h
  double dissipation_physical{0.0};
  /// Bregman remainders of the kinetic and potential parts; >= 0 by convexity.
  double dissipation_numerical{0.0};
  bool accepted{false};

  double dissipation() const { return dissipation_physical + dissipation_numerical; }
};

/**
 * Backward-Euler step in the velocity unknown v+:
 *
 *   R(v) = P(v) - w + dt A_h(u + dt v) + dt B(t + dt, v) = 0,
 *   u+ = u + dt v+,  w+ = P(v+).
 *
 * R is the gradient of a strictly convex function of v, so the Newton
 * direction is always a descent direction for ||R||.
 */
Vec step_residual(const State& state, std::span<const double> v, double dt, const ProblemSpec& spec);
Tridiagonal step_jacobian(const State& state, std::span<const double> v, double dt, const ProblemSpec& spec);

/// Never throws on nonconvergence; check StepOutcome::accepted.
StepOutcome implicit_step(const State& state, double dt, const ProblemSpec& spec);

/// Fixed-dt integration over [0, t_end]. A failing step is retried as two
/// half steps, recursively, up to 10 halvings.
Trajectory run_simulation(const ProblemSpec& spec);

/// Classical RK4 on the same semidiscrete system with step dt / refinement.
/// Samples are taken at the same times as run_simulation would record.
Trajectory oracle_run(const ProblemSpec& spec, int refinement);

}  // namespace decaylab
