#include "decaylab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace decaylab {

namespace {

// (eps^2 + s^2)^e with the common exponents special-cased.
double reg_power(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 0.5) return std::sqrt(base);
  if (e == 1.0) return base;
  if (e == -0.25) return 1.0 / std::sqrt(std::sqrt(base));
  return std::pow(base, e);
}

double abs_power(double s, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return std::abs(s);
  if (e == 2.0) return s * s;
  return std::pow(std::abs(s), e);
}

}  // namespace

double phi(double s, double p, double eps) {
  if (p == 2.0) return s;
  if (eps == 0.0) {
    if (s == 0.0) return 0.0;
    return abs_power(s, p - 2.0) * s;
  }
  return reg_power(eps * eps + s * s, 0.5 * (p - 2.0)) * s;
}

double phi_prime(double s, double p, double eps) {
  if (p == 2.0) return 1.0;
  if (eps == 0.0) {
    if (s == 0.0) return p < 2.0 ? INFINITY : 0.0;
    return (p - 1.0) * abs_power(s, p - 2.0);
  }
  const double base = eps * eps + s * s;
  return reg_power(base, 0.5 * (p - 2.0)) / base * (eps * eps + (p - 1.0) * s * s);
}

double phi_potential(double s, double p, double eps) {
  if (p == 2.0) return 0.5 * s * s;
  if (eps == 0.0) return abs_power(s, p) / p;
  const double base = eps * eps + s * s;
  return (reg_power(base, 0.5 * p) - std::pow(eps, p)) / p;
}

double phi_inverse(double w, double p, double eps) {
  const double p_conj = p / (p - 1.0);
  if (p == 2.0) return w;
  if (eps == 0.0) return phi(w, p_conj, 0.0);
  if (w == 0.0) return 0.0;
  if (p == 3.0) {
    // s^2 (eps^2 + s^2) = w^2
    const double e2 = eps * eps;
    const double s2 = 2.0 * w * w / (e2 + std::sqrt(e2 * e2 + 4.0 * w * w));
    return std::copysign(std::sqrt(s2), w);
  }

  const double target = std::abs(w);
  const double guess = phi(target, p_conj, 0.0);
  double lo = 0.0;
  double hi = guess;
  if (p < 2.0) {
    // the regularized map lies below the exact one, so the root is >= guess
    lo = guess;
    hi = std::max(2.0 * guess, eps);
    while (phi(hi, p, eps) < target) hi *= 2.0;
  }
  double s = guess;
  for (int it = 0; it < 100; ++it) {
    const double f = phi(s, p, eps) - target;
    if (f == 0.0) break;
    if (f > 0.0)
      hi = std::min(hi, s);
    else
      lo = std::max(lo, s);
    const double d = phi_prime(s, p, eps);
    double next = s - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 4e-16 * std::abs(next)) {
      s = next;
      break;
    }
    s = next;
  }
  return std::copysign(s, w);
}

double inner_h(std::span<const double> x, std::span<const double> y, double h) {
  if (x.size() != y.size()) throw std::invalid_argument("inner_h: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return h * sum;
}

double norm_pow_h(std::span<const double> z, double p, double h) {
  double sum = 0.0;
  for (double zi : z) sum += abs_power(zi, p);
  return h * sum;
}

Vec p_apply(std::span<const double> v, double ell, double eps) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = phi(v[i], ell, eps);
  return out;
}

Vec p_invert(std::span<const double> w, double ell, double eps) {
  Vec out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = phi_inverse(w[i], ell, eps);
  return out;
}

double p_potential(std::span<const double> v, double ell, double h, double eps) {
  double sum = 0.0;
  for (double vi : v) sum += phi_potential(vi, ell, eps);
  return h * sum;
}

double p_star(std::span<const double> v, double ell, double h, double eps) {
  double sum = 0.0;
  for (double vi : v) sum += phi(vi, ell, eps) * vi - phi_potential(vi, ell, eps);
  return h * sum;
}

Vec gradients(std::span<const double> u, double h) {
  const std::size_t n = u.size();
  Vec d(n + 1);
  double left = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = (u[k] - left) / h;
    left = u[k];
  }
  d[n] = (0.0 - left) / h;
  return d;
}

Vec a_apply(std::span<const double> u, double q, double a, double h, double eps) {
  const std::size_t n = u.size();
  const Vec d = gradients(u, h);
  Vec flux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) flux[k] = phi(d[k], q, eps);
  Vec out(n);
  const double scale = a / h;
  for (std::size_t i = 0; i < n; ++i) out[i] = -scale * (flux[i + 1] - flux[i]);
  return out;
}

double a_potential(std::span<const double> u, double q, double a, double h, double eps) {
  const Vec d = gradients(u, h);
  double sum = 0.0;
  for (double dk : d) sum += phi_potential(dk, q, eps);
  return a * h * sum;
}

Vec Tridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i - 1] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

Vec Tridiagonal::solve(std::span<const double> rhs) const {
  const std::size_t n = size();
  Vec c(n), x(n);
  double denom = diag[0];
  if (denom == 0.0 || !std::isfinite(denom)) throw std::runtime_error("tridiagonal solve: singular pivot");
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i - 1] * c[i - 1];
    if (denom == 0.0 || !std::isfinite(denom)) throw std::runtime_error("tridiagonal solve: singular pivot");
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

Tridiagonal a_jacobian(std::span<const double> u, double q, double a, double h, double eps) {
  const std::size_t n = u.size();
  const Vec d = gradients(u, h);
  Vec dflux(n + 1);
  for (std::size_t k = 0; k <= n; ++k) dflux[k] = phi_prime(d[k], q, eps);
  const double scale = a / (h * h);
  Tridiagonal jac(n);
  for (std::size_t i = 0; i < n; ++i) {
    jac.diag[i] = scale * (dflux[i] + dflux[i + 1]);
    if (i + 1 < n) {
      jac.upper[i] = -scale * dflux[i + 1];
      jac.lower[i] = -scale * dflux[i + 1];
    }
  }
  return jac;
}

Vec b_apply(double t, std::span<const double> v, const ProblemSpec& spec) {
  const auto& g = spec.grid;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = spec.damping(t, g.node(i)) * phi(v[i], spec.exponents.m, spec.eps_reg);
  return out;
}

double dissipation(double t, std::span<const double> v, const ProblemSpec& spec) {
  const Vec b = b_apply(t, v, spec);
  return inner_h(b, v, spec.grid.h);
}

double b_potential(double t, std::span<const double> v, const ProblemSpec& spec) {
  const auto& g = spec.grid;
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    sum += spec.damping(t, g.node(i)) * phi_potential(v[i], spec.exponents.m, spec.eps_reg);
  return g.h * sum;
}

}  // namespace decaylab
