#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "decaylab/model.hpp"

namespace decaylab {

/// Kinetic part P*_h(u_t) with u_t recovered from w, potential part A_h(u).
EnergyRecord total_energy(const State& state, const ProblemSpec& spec);

struct BalanceReport {
  double max_abs{0.0};
  std::vector<double> series;
  /// E_k - E_0 + sum of the physical dissipation dt<B, v+>_h only. Equals
  /// E_k - E_0 when there is no damping.
  std::vector<double> physical_series;
};

/// residual_k = E_k - E_0 + sum_{j<=k} D_j over the recorded samples.
/// Throws std::invalid_argument for a trajectory whose echo does not match spec.
BalanceReport balance_residual(const Trajectory& traj, const ProblemSpec& spec);

struct MonotoneReport {
  std::vector<std::size_t> increases;  // indices k+1 with E_{k+1} > E_k + tol*E_0
  std::vector<std::size_t> out_of_range;  // indices with E_k outside [0, E_0 (1 + tol)]
  bool passed() const { return increases.empty() && out_of_range.empty(); }
};

MonotoneReport check_monotone(std::span<const double> energies, double rel_tol = 1e-12);
MonotoneReport check_monotone(const Trajectory& traj, double rel_tol = 1e-12);

}  // namespace decaylab
