#include "decaylab/model.hpp"

#include <cmath>
#include <numbers>

#include "decaylab/operators.hpp"

namespace decaylab {

Vec Grid::nodes() const {
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

Grid build_grid(std::size_t n, double length) {
  if (n < 2) throw ConfigError("grid.n must satisfy n >= 2");
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("grid.length must be positive");
  return Grid{n, length, length / static_cast<double>(n + 1)};
}

void Exponents::validate() const {
  if (!(ell > 1.0)) throw ConfigError("exponents.ell must satisfy ell > 1");
  if (!(m >= ell)) throw ConfigError("exponents.m must satisfy ell <= m");
  if (!(q > 1.0)) throw ConfigError("exponents.q must satisfy q > 1");
  if (!(q <= ell)) throw ConfigError("exponents.q must satisfy q <= ell");
  if (!(p_a1 > 0.0)) throw ConfigError("exponents.p_a1 must satisfy p > 0");
}

double PowerProfile::operator()(double t) const {
  if (theta == 0.0) return c;
  return c * std::pow(1.0 + t, theta);
}

double PowerProfile::derivative(double t) const {
  if (theta == 0.0) return 0.0;
  return c * theta * std::pow(1.0 + t, theta - 1.0);
}

double weight_eval(const PowerProfile& profile, double t) {
  if (t < 0.0) throw std::invalid_argument("weight_eval: t must be nonnegative");
  return profile(t);
}

double DampingProfile::spatial(double x) const {
  if (shape == SpatialShape::uniform) return 1.0;
  const double z = (x - bump_center) / bump_width;
  if (std::abs(z) >= 0.5) return 0.0;
  const double c = std::cos(std::numbers::pi * z);
  return c * c;
}

double DampingProfile::operator()(double t, double x) const {
  const double temporal = temporal_sigma == 0.0 ? 1.0 : std::pow(1.0 + t, temporal_sigma);
  return b0 * spatial(x) * temporal;
}

double DampingProfile::sup(double t) const {
  const double temporal = temporal_sigma == 0.0 ? 1.0 : std::pow(1.0 + t, temporal_sigma);
  return b0 * temporal;
}

double initial_shape_value(InitialShape shape, double x, double length) {
  using std::numbers::pi;
  switch (shape) {
    case InitialShape::zero:
      return 0.0;
    case InitialShape::sine:
      return std::sin(pi * x / length);
    case InitialShape::sine_mode2:
      return std::sin(2.0 * pi * x / length);
    case InitialShape::bump: {
      // cos^2 bump of unit width (or half the domain, if shorter) at the midpoint
      const double width = std::min(1.0, 0.5 * length);
      const double z = (x - 0.5 * length) / width;
      if (std::abs(z) >= 0.5) return 0.0;
      const double c = std::cos(pi * z);
      return c * c;
    }
  }
  return 0.0;
}

void ProblemSpec::validate() const {
  if (grid.n < 2) throw ConfigError("grid.n must satisfy n >= 2");
  if (!(grid.length > 0.0)) throw ConfigError("grid.length must be positive");
  exponents.validate();
  if (!(a > 0.0)) throw ConfigError("a must satisfy a > 0");
  if (!(damping.b0 >= 0.0)) throw ConfigError("damping.b0 must satisfy b(t,x) >= 0");
  if (damping.shape == SpatialShape::bump && !(damping.bump_width > 0.0))
    throw ConfigError("damping.spatial.width must be positive");
  auto check_profile = [](const PowerProfile& p, const char* name) {
    if (!(p.c > 0.0) || !std::isfinite(p.theta))
      throw ConfigError(std::string("weights.") + name + ".c must be positive");
  };
  check_profile(weights.lambda, "lambda");
  check_profile(weights.alpha, "alpha");
  if (!weights.delta.empirical) check_profile(weights.delta.profile, "delta");
  if (!weights.eta.empirical) check_profile(weights.eta.profile, "eta");
  if (!weights.j.empirical) check_profile(weights.j.profile, "j");
  if (!(dt > 0.0)) throw ConfigError("time.dt must satisfy dt > 0");
  if (!(t_end >= 0.0)) throw ConfigError("time.t_end must be nonnegative");
  if (!(eps_reg >= 0.0)) throw ConfigError("eps_reg must satisfy eps_reg >= 0");
  if (!(newton.tol > 0.0)) throw ConfigError("newton.tol must be positive");
  if (newton.max_iter < 1) throw ConfigError("newton.max_iter must be at least 1");
  if (record_every < 1) throw ConfigError("time.record_every must be at least 1");
}

State initial_state(const ProblemSpec& spec) {
  spec.validate();
  const auto& g = spec.grid;
  State s;
  s.t = 0.0;
  s.u.resize(g.n);
  s.w.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    s.u[i] = spec.initial.amplitude * initial_shape_value(spec.initial.psi, x, g.length);
    const double v = spec.initial.amplitude * initial_shape_value(spec.initial.phi, x, g.length);
    s.w[i] = phi(v, spec.exponents.ell, spec.eps_reg);
  }
  return s;
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::energy_floor:
      return "energy_floor";
  }
  return "unknown";
}

}  // namespace decaylab
