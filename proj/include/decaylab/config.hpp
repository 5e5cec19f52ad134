#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decaylab/model.hpp"

namespace decaylab {

struct LyapunovSettings {
  double mu{0.01};
  std::optional<double> nu;  // linked to mu through c4 when absent
  double c4{1.0};
  bool auto_tune{true};
};

struct AnalysisSettings {
  double window_fraction{0.5};
  double slope_tolerance{0.15};
  std::size_t sample_count{1000};
  /// exponent of the discrete W' norm; 0 selects ell'
  double rho_conj{0.0};
  std::size_t t_samples{200};
  bool eps_sensitivity{true};
};

struct OutputSettings {
  std::string csv{"trajectory.csv"};
  std::string summary{"summary.json"};
};

struct SweepGrid {
  bool present{false};
  std::vector<double> ell;
  std::vector<double> m;
  std::vector<double> q;
  std::vector<double> b0;
};

struct RunConfig {
  ProblemSpec spec;
  LyapunovSettings lyapunov;
  AnalysisSettings analysis;
  std::uint64_t seed{42};
  OutputSettings outputs;
  SweepGrid sweep;
};

/**
 * Reads and validates a JSON configuration. Every key is optional and
 * falls back to its documented default; unknown keys are rejected.
 *
 * Errors are ConfigError with either a JSON-pointer path ("/grid/n: ...")
 * for schema problems or the named constraint for invariant violations.
 */
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_json(const nlohmann::json& doc);

/// Canonical, fully-defaulted form of the configuration.
nlohmann::json config_to_json(const RunConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace decaylab
