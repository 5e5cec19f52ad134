#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "decaylab/analysis.hpp"
#include "decaylab/assumptions.hpp"
#include "decaylab/config.hpp"
#include "decaylab/lyapunov.hpp"

namespace decaylab {

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_verdict = 2 };

/// Everything cmd_run produces before anything is written.
struct RunResult {
  Trajectory traj;
  ResolvedWeights weights;
  LyapunovParams params;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  nlohmann::json summary;

  bool passed() const { return failures.empty(); }
};

/// Configuration warnings, e.g. eps_reg = 0 with a singular power map.
std::vector<std::string> config_warnings(const ProblemSpec& spec);

/// Simulation, assumption checks, Lyapunov diagnostics and decay fit.
/// Throws NonConvergence on solver failure. summary lacks wall_time_s.
RunResult execute_run(const RunConfig& cfg);

void write_trajectory_csv(std::ostream& out, const RunResult& result);

/// Sorted keys, two-space indent, trailing newline.
void write_summary(std::ostream& out, const nlohmann::json& summary);

/// Each returns an ExitCode and reports problems on diag.
int cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& diag);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, unsigned workers, std::ostream& diag);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& diag);

/// Cartesian product cap for cmd_sweep.
inline constexpr std::size_t max_sweep_size = 1000;

inline constexpr const char* csv_header =
    "t,E,kinetic,potential,dissipation_cum,balance_residual,H_over_lambda,G_over_lambda,cross_term,F_diff,newton_iters";

}  // namespace decaylab
