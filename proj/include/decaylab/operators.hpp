#pragma once

#include <span>

#include "decaylab/model.hpp"

namespace decaylab {

// Scalar kernel phi_p^eps(s) = (eps^2 + s^2)^((p-2)/2) * s. With eps = 0 it is
// exactly |s|^(p-2) s.
double phi(double s, double p, double eps);
double phi_prime(double s, double p, double eps);
/// Antiderivative of phi vanishing at 0: ((eps^2 + s^2)^(p/2) - eps^p) / p.
double phi_potential(double s, double p, double eps);
/// Inverse of phi_p^eps. Exact phi_{p'} for eps = 0, safeguarded Newton otherwise.
double phi_inverse(double w, double p, double eps);

// Grid pairings. All norms use the rectangle rule h * sum.
double inner_h(std::span<const double> x, std::span<const double> y, double h);
/// ||z||_{p,h}^p
double norm_pow_h(std::span<const double> z, double p, double h);

Vec p_apply(std::span<const double> v, double ell, double eps);
Vec p_invert(std::span<const double> w, double ell, double eps = 0.0);
double p_potential(std::span<const double> v, double ell, double h, double eps = 0.0);
/// <P(v), v>_h - P_h(v)
double p_star(std::span<const double> v, double ell, double h, double eps = 0.0);

/// Gradient differences D_{i+1/2}, i = 0..n, with zero boundary values.
Vec gradients(std::span<const double> u, double h);
/// Flux-form discrete q-Laplacian; the <.,.>_h gradient of a_potential.
Vec a_apply(std::span<const double> u, double q, double a, double h, double eps);
double a_potential(std::span<const double> u, double q, double a, double h, double eps);

/// Symmetric tridiagonal matrix stored by diagonals.
struct Tridiagonal {
  Vec lower;  // size n-1, entry (i+1, i)
  Vec diag;   // size n
  Vec upper;  // size n-1, entry (i, i+1)

  explicit Tridiagonal(std::size_t n = 0) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}
  std::size_t size() const { return diag.size(); }
  Vec multiply(std::span<const double> x) const;
  /// Thomas algorithm; throws std::runtime_error on a zero pivot.
  Vec solve(std::span<const double> rhs) const;
};

/// Jacobian of a_apply with respect to u.
Tridiagonal a_jacobian(std::span<const double> u, double q, double a, double h, double eps);

Vec b_apply(double t, std::span<const double> v, const ProblemSpec& spec);
/// <B(t, v), v>_h
double dissipation(double t, std::span<const double> v, const ProblemSpec& spec);
/// h * sum b(t, x_i) * phi_potential(v_i, m); the potential whose gradient is B.
double b_potential(double t, std::span<const double> v, const ProblemSpec& spec);

}  // namespace decaylab
