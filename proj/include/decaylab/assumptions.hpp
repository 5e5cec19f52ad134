#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "decaylab/lyapunov.hpp"
#include "decaylab/model.hpp"

namespace decaylab {

enum class Verdict { pass, fail, skipped };

std::string to_string(Verdict v);

/// Concrete counterexample: the sampled field or time and both sides of
/// the violated inequality.
struct Witness {
  double t{0.0};
  Vec field;
  double lhs{0.0};
  double rhs{0.0};
};

struct ConditionResult {
  Verdict verdict{Verdict::skipped};
  std::string note;
  std::optional<Witness> witness;
};

/// All samples had zero dissipation, so j and eta cannot be estimated.
class DegenerateSamples : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Seeded sums of up to five sine modes with amplitudes in [-1, 1]. These
/// vanish at both ends, so they are admissible displacements as well as
/// velocities.
class FieldSampler {
public:
  FieldSampler(const Grid& grid, std::uint64_t seed);
  Vec next();

private:
  double uniform();

  Grid grid_;
  std::mt19937_64 engine_;
};

struct SampleSettings {
  std::size_t count{1000};
  std::uint64_t seed{42};
  /// Exponent of the discrete W' norm; 0 selects ell'.
  double rho_conj{0.0};
  /// Horizon of the t-grid over which j is maximized.
  double horizon{0.0};
};

struct ConstantEstimates {
  double rho_conj{0.0};
  double delta_emp{0.0};
  double j_emp{0.0};
  double eta_emp{0.0};
  /// sup_x b(0, x), the Hoelder bound for eta in the dual-m norm
  double eta_closed_form{0.0};
  std::size_t samples{0};
  std::size_t skipped{0};
  // t-dependence follows from b(t,x) = (1+t)^sigma b(0,x)
  PowerProfile delta_profile{};
  PowerProfile eta_profile{};
  PowerProfile j_profile{};
  ConditionResult a2;
  ConditionResult a3;
};

/// Throws std::invalid_argument for count < 100 and DegenerateSamples when b == 0.
ConstantEstimates estimate_constants(const ProblemSpec& spec, const SampleSettings& settings = {});

struct OperatorChecks {
  double k0{0.0};
  /// min over samples of (k0 ||P v||^{ell'} - lhs) / (k0 ||P v||^{ell'})
  double a1_margin{0.0};
  /// min over samples of (<A u, u> - q A(u)) / (q A(u))
  double a4_margin{0.0};
  double c0_emp{0.0};
  std::size_t samples{0};
  ConditionResult a1;
  ConditionResult a4;
};

/// k0 defaults to p + 1, the canonical constant.
OperatorChecks check_a1_a4(const ProblemSpec& spec, const SampleSettings& settings = {},
                           std::optional<double> k0 = std::nullopt);

struct WeightChecks {
  double c_alpha_lambda{0.0};
  double c_j_eta{0.0};
  std::size_t t_samples{0};
  double horizon{0.0};
  ConditionResult b1;
  ConditionResult b2;
  ConditionResult b3;
  ConditionResult b4;
};

/// Evaluates the weight conditions on a uniform t-grid of [0, horizon]
/// using closed-form derivatives. (B3)/(B4) additionally require the
/// power-law growth exponent to be nonpositive so the bound holds on [0, inf).
WeightChecks check_b1_b4(const ResolvedWeights& w, const Exponents& ex, double horizon, std::size_t t_samples = 200);

struct AssumptionReport {
  std::optional<ConstantEstimates> constants;
  std::string constants_error;
  OperatorChecks operators;
  WeightChecks weights;

  bool all_pass() const;
};

}  // namespace decaylab
