#pragma once

#include <functional>
#include <span>
#include <string>

#include "decaylab/lyapunov.hpp"
#include "decaylab/model.hpp"

namespace decaylab {

/// tau(t) = int_0^t alpha(s) / lambda(s) ds in closed form for the power family.
double tau_integral(const PowerProfile& lambda, const PowerProfile& alpha, double t);

/// Composite trapezoid with Richardson extrapolation, refined until two
/// successive estimates agree to rel_tol. For tabulated or non-power weights.
double tau_integral_numeric(const std::function<double(double)>& ratio, double t, double rel_tol = 1e-8);

struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double r_squared{0.0};
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

enum class DecayMode { polynomial, exponential };

struct DecayFit {
  DecayMode mode{DecayMode::polynomial};
  /// -ell/(m-ell) for polynomial decay; NaN for exponential.
  double predicted_exponent{0.0};
  double fitted_slope{0.0};
  /// exp(intercept): C for polynomial, C* for exponential.
  double fitted_constant{0.0};
  double t_lo{0.0};
  double t_hi{0.0};
  double r_squared{0.0};
  std::size_t samples{0};
  /// polynomial: sup over the window of E (1 + tau)^(ell/(m-ell))
  double tail_bound_sup{0.0};
  /// tail_bound_sup over [T/2, T] divided by the same over [T/4, T/2]
  double stability_ratio{0.0};
  bool passed{false};
  std::string note;
};

struct FitSettings {
  double window_fraction{0.5};
  double slope_tolerance{0.15};
  double r_squared_min{0.95};
  double stability_lo{0.8};
  double stability_hi{1.25};
};

/// Requires m > ell. Regresses log E on log(1 + tau). Throws
/// std::invalid_argument if the window holds fewer than 50 samples.
DecayFit fit_polynomial_decay(const Trajectory& traj, const WeightProfiles& weights, const FitSettings& settings = {});

/// Requires m = ell. Regresses log E on tau; C** = -slope.
DecayFit fit_exponential_decay(const Trajectory& traj, const WeightProfiles& weights,
                               const FitSettings& settings = {});

/// Dispatches on m == ell.
DecayFit fit_decay(const Trajectory& traj, const WeightProfiles& weights, const FitSettings& settings = {});

std::string to_string(DecayMode mode);

}  // namespace decaylab
