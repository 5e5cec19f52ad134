#include "decaylab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace decaylab {

double tau_integral(const PowerProfile& lambda, const PowerProfile& alpha, double t) {
  if (t < 0.0) throw std::invalid_argument("tau_integral: t must be nonnegative");
  const double c = alpha.c / lambda.c;
  const double theta = alpha.theta - lambda.theta;
  if (theta == 0.0) return c * t;
  if (theta == -1.0) return c * std::log1p(t);
  const double e = theta + 1.0;
  return c * std::expm1(e * std::log1p(t)) / e;
}

double tau_integral_numeric(const std::function<double(double)>& ratio, double t, double rel_tol) {
  if (t < 0.0) throw std::invalid_argument("tau_integral_numeric: t must be nonnegative");
  if (t == 0.0) return 0.0;
  // Romberg: trapezoid row refined by halving, Richardson across columns
  std::vector<double> prev{0.5 * t * (ratio(0.0) + ratio(t))};
  std::size_t panels = 1;
  for (int level = 1; level < 25; ++level) {
    const double hstep = t / static_cast<double>(2 * panels);
    double mid = 0.0;
    for (std::size_t i = 0; i < panels; ++i) mid += ratio((2.0 * static_cast<double>(i) + 1.0) * hstep);
    panels *= 2;
    std::vector<double> row{0.5 * prev[0] + hstep * mid};
    double factor = 4.0;
    for (std::size_t j = 1; j <= prev.size(); ++j) {
      row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0));
      factor *= 4.0;
    }
    const double est = row.back();
    const double last = prev.back();
    if (level > 3 && std::abs(est - last) <= rel_tol * std::abs(est)) return est;
    prev = std::move(row);
  }
  return prev.back();
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

constexpr std::size_t kMinWindowSamples = 50;

struct Window {
  std::vector<double> t;
  std::vector<double> energy;
};

Window collect(const Trajectory& traj, double t_lo, double t_hi) {
  Window w;
  for (const auto& s : traj.samples) {
    const double t = s.energy.t;
    if (t >= t_lo && t <= t_hi && s.energy.total > 0.0) {
      w.t.push_back(t);
      w.energy.push_back(s.energy.total);
    }
  }
  return w;
}

double sup_weighted(const Trajectory& traj, const WeightProfiles& wp, double exponent, double t_lo, double t_hi) {
  double sup = 0.0;
  for (const auto& s : traj.samples) {
    const double t = s.energy.t;
    if (t < t_lo || t > t_hi) continue;
    const double tau = tau_integral(wp.lambda, wp.alpha, t);
    sup = std::max(sup, s.energy.total * std::pow(1.0 + tau, exponent));
  }
  return sup;
}

DecayFit prepare(const Trajectory& traj, const FitSettings& settings, Window& window) {
  if (traj.samples.empty()) throw std::invalid_argument("decay fit: empty trajectory");
  DecayFit fit;
  fit.t_hi = traj.samples.back().energy.t;
  fit.t_lo = fit.t_hi * (1.0 - settings.window_fraction);
  window = collect(traj, fit.t_lo, fit.t_hi);
  fit.samples = window.t.size();
  if (fit.samples < kMinWindowSamples)
    throw std::invalid_argument("decay fit: window [" + std::to_string(fit.t_lo) + ", " +
                                std::to_string(fit.t_hi) + "] holds fewer than 50 samples");
  if (traj.spec.damping.b0 == 0.0) fit.note = "numerical dissipation only";
  if (traj.status == RunStatus::energy_floor) {
    if (!fit.note.empty()) fit.note += "; ";
    fit.note += "trajectory stopped at the energy floor";
  }
  return fit;
}

}  // namespace

DecayFit fit_polynomial_decay(const Trajectory& traj, const WeightProfiles& weights, const FitSettings& settings) {
  const auto& ex = traj.spec.exponents;
  if (!(ex.m > ex.ell)) throw std::invalid_argument("fit_polynomial_decay: requires m > ell");
  Window window;
  DecayFit fit = prepare(traj, settings, window);
  fit.mode = DecayMode::polynomial;
  const double rate = ex.ell / (ex.m - ex.ell);
  fit.predicted_exponent = -rate;

  std::vector<double> x(window.t.size()), y(window.t.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::log1p(tau_integral(weights.lambda, weights.alpha, window.t[i]));
    y[i] = std::log(window.energy[i]);
  }
  const LineFit lf = fit_line(x, y);
  fit.fitted_slope = lf.slope;
  fit.fitted_constant = std::exp(lf.intercept);
  fit.r_squared = lf.r_squared;

  const double t_end = fit.t_hi;
  fit.tail_bound_sup = sup_weighted(traj, weights, rate, fit.t_lo, t_end);
  const double previous = sup_weighted(traj, weights, rate, 0.25 * t_end, 0.5 * t_end);
  fit.stability_ratio = previous > 0.0 ? fit.tail_bound_sup / previous : std::numeric_limits<double>::quiet_NaN();
  fit.passed = fit.fitted_slope <= fit.predicted_exponent * (1.0 - settings.slope_tolerance) &&
               fit.stability_ratio >= settings.stability_lo && fit.stability_ratio <= settings.stability_hi;
  return fit;
}

DecayFit fit_exponential_decay(const Trajectory& traj, const WeightProfiles& weights, const FitSettings& settings) {
  const auto& ex = traj.spec.exponents;
  if (ex.m != ex.ell) throw std::invalid_argument("fit_exponential_decay: requires m = ell");
  Window window;
  DecayFit fit = prepare(traj, settings, window);
  fit.mode = DecayMode::exponential;
  fit.predicted_exponent = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> x(window.t.size()), y(window.t.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = tau_integral(weights.lambda, weights.alpha, window.t[i]);
    y[i] = std::log(window.energy[i]);
  }
  const LineFit lf = fit_line(x, y);
  fit.fitted_slope = lf.slope;
  fit.fitted_constant = std::exp(lf.intercept);
  fit.r_squared = lf.r_squared;
  fit.passed = -lf.slope > 0.0 && lf.r_squared >= settings.r_squared_min;
  return fit;
}

DecayFit fit_decay(const Trajectory& traj, const WeightProfiles& weights, const FitSettings& settings) {
  if (traj.spec.exponents.m == traj.spec.exponents.ell) return fit_exponential_decay(traj, weights, settings);
  return fit_polynomial_decay(traj, weights, settings);
}

std::string to_string(DecayMode mode) { return mode == DecayMode::polynomial ? "polynomial" : "exponential"; }

}  // namespace decaylab
