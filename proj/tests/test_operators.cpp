#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decaylab/operators.hpp"
#include "support.hpp"

using namespace decaylab;
using std::numbers::pi;

TEST_CASE("phi examples") {
  for (double x : {-3.0, -0.1, 0.0, 0.7, 12.0}) CHECK(phi(x, 2.0, 0.0) == x);
  CHECK(phi(2.0, 3.0, 0.0) == 4.0);
  CHECK(phi(-4.0, 1.5, 0.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(phi(0.0, 1.5, 0.0) == 0.0);
}

TEST_CASE("phi is odd and monotone") {
  testing::Rng rng(11);
  for (double p : {1.2, 1.5, 2.0, 3.0, 4.0}) {
    for (double eps : {0.0, 1e-8, 1e-2}) {
      for (int i = 0; i < 500; ++i) {
        const double s1 = rng.uniform(-5.0, 5.0);
        const double s2 = rng.uniform(-5.0, 5.0);
        CHECK(phi(-s1, p, eps) == -phi(s1, p, eps));
        CHECK((phi(s1, p, eps) - phi(s2, p, eps)) * (s1 - s2) >= 0.0);
      }
    }
  }
}

TEST_CASE("phi_prime and phi_potential are consistent derivatives") {
  testing::Rng rng(12);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (double eps : {0.0, 1e-3, 0.5}) {
      for (int i = 0; i < 100; ++i) {
        const double s = rng.uniform(0.05, 3.0) * (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
        const double d = 1e-6;
        const double fd_phi = (phi(s + d, p, eps) - phi(s - d, p, eps)) / (2 * d);
        const double fd_pot = (phi_potential(s + d, p, eps) - phi_potential(s - d, p, eps)) / (2 * d);
        CHECK(testing::rel_diff(phi_prime(s, p, eps), fd_phi) <= 1e-6);
        CHECK(testing::rel_diff(phi(s, p, eps), fd_pot) <= 1e-6);
      }
    }
  }
}

TEST_CASE("phi_inverse inverts the regularized map") {
  testing::Rng rng(13);
  for (double p : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (double eps : {0.0, 1e-8, 1e-3, 0.3}) {
      for (int i = 0; i < 200; ++i) {
        const double s = rng.uniform(-4.0, 4.0);
        CHECK(std::abs(phi_inverse(phi(s, p, eps), p, eps) - s) <= 1e-12 * std::max(1.0, std::abs(s)));
      }
    }
  }
}

TEST_CASE("p_apply and p_invert examples") {
  const Vec v{1.0, -1.0, 2.0};
  CHECK(p_apply(v, 2.0, 0.0) == v);
  const Vec p3 = p_apply(v, 3.0, 0.0);
  CHECK(p3 == Vec{1.0, -1.0, 4.0});
  CHECK(p_invert(v, 2.0) == v);
  CHECK(p_invert(Vec{4.0}, 3.0)[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("p_invert round trip") {
  testing::Rng rng(14);
  for (double ell : {1.5, 2.0, 3.0}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Vec v = rng.vector(16, -3.0, 3.0);
      CHECK(testing::max_abs_diff(p_invert(p_apply(v, ell, 0.0), ell), v) <= 1e-12);
    }
  }
}

TEST_CASE("norm identity for P") {
  testing::Rng rng(15);
  const double h = 1.0 / 17.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Vec v = rng.vector(16, -2.0, 2.0);
    const double lhs = norm_pow_h(p_apply(v, 3.0, 0.0), 1.5, h);
    const double rhs = norm_pow_h(v, 3.0, h);
    CHECK(testing::rel_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("P potentials") {
  const Vec zero(5, 0.0);
  CHECK(p_potential(zero, 1.5, 0.1) == 0.0);
  CHECK(p_star(zero, 1.5, 0.1) == 0.0);

  const Vec ones(3, 1.0);
  CHECK(p_potential(ones, 2.0, 0.25) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(p_star(ones, 2.0, 0.25) == doctest::Approx(0.375).epsilon(1e-15));

  testing::Rng rng(16);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec v = rng.vector(12, -2.0, 2.0);
    const double h = 1.0 / 13.0;
    CHECK(testing::rel_diff(p_star(v, 3.0, h), 2.0 * p_potential(v, 3.0, h)) <= 1e-12);
    for (double ell : {1.5, 2.0, 3.0}) {
      const double pair = inner_h(p_apply(v, ell, 0.0), v, h);
      CHECK(testing::rel_diff(pair, ell * p_potential(v, ell, h)) <= 1e-10);
      CHECK(testing::rel_diff(p_star(v, ell, h), (ell - 1.0) * p_potential(v, ell, h)) <= 1e-10);
      CHECK(p_star(v, ell, h) >= 0.0);
    }
  }
}

TEST_CASE("A_h at q = 2 is the standard three-point Laplacian") {
  testing::Rng rng(17);
  const std::size_t n = 20;
  const double h = 1.0 / 21.0, a = 1.7;
  const Vec u = rng.vector(n);
  const Vec au = a_apply(u, 2.0, a, h, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    CHECK(au[i] == doctest::Approx(-a * (left - 2.0 * u[i] + right) / (h * h)).epsilon(1e-12));
  }
}

TEST_CASE("A_h homogeneity and gradient of the potential") {
  testing::Rng rng(18);
  const std::size_t n = 16;
  const double h = 1.0 / 17.0;
  for (double q : {1.5, 2.0, 4.0}) {
    for (double eps : {0.0, 1e-8}) {
      for (int rep = 0; rep < 20; ++rep) {
        const Vec u = rng.vector(n);
        const double a = rng.uniform(0.5, 2.0);
        const Vec au = a_apply(u, q, a, h, eps);
        if (eps == 0.0)
          CHECK(testing::rel_diff(inner_h(au, u, h), q * a_potential(u, q, a, h, 0.0)) <= 1e-10);

        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          Vec up = u, um = u;
          up[i] += 1e-6;
          um[i] -= 1e-6;
          const double fd = (a_potential(up, q, a, h, eps) - a_potential(um, q, a, h, eps)) / (2e-6 * h);
          err = std::max(err, std::abs(fd - au[i]));
          scale = std::max(scale, std::abs(au[i]));
        }
        CHECK(err / scale <= 1e-6);
      }
    }
  }
}

TEST_CASE("A_h Jacobian matches finite differences") {
  testing::Rng rng(19);
  const std::size_t n = 10;
  const double h = 1.0 / 11.0;
  for (double q : {1.5, 2.0, 3.0}) {
    const Vec u = rng.vector(n);
    const Tridiagonal jac = a_jacobian(u, q, 1.0, h, 1e-8);
    for (std::size_t j = 0; j < n; ++j) {
      Vec up = u, um = u;
      up[j] += 1e-7;
      um[j] -= 1e-7;
      const Vec fp = a_apply(up, q, 1.0, h, 1e-8), fm = a_apply(um, q, 1.0, h, 1e-8);
      Vec e(n, 0.0);
      e[j] = 1.0;
      const Vec col = jac.multiply(e);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs((fp[i] - fm[i]) / 2e-7 - col[i]) <= 1e-5 * std::max(1.0, std::abs(col[i])));
    }
  }
}

TEST_CASE("sine quadrature of A_h and its potential") {
  const std::size_t n = 200;
  const Grid g = build_grid(n, 1.0);
  Vec u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(pi * g.node(i));
  const Vec au = a_apply(u, 2.0, 1.0, g.h, 0.0);
  CHECK(testing::rel_diff(inner_h(au, u, g.h), pi * pi / 2.0) <= 1e-3);
  CHECK(testing::rel_diff(a_potential(u, 2.0, 1.0, g.h, 0.0), pi * pi / 4.0) <= 1e-3);
  CHECK(a_potential(Vec(n, 0.0), 1.5, 1.0, g.h, 0.0) == 0.0);
}

TEST_CASE("tridiagonal solve") {
  testing::Rng rng(20);
  const std::size_t n = 30;
  Tridiagonal t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.diag[i] = 4.0 + rng.uniform(0, 1);
    if (i + 1 < n) {
      t.lower[i] = rng.uniform(-1, 1);
      t.upper[i] = rng.uniform(-1, 1);
    }
  }
  const Vec x = rng.vector(n);
  CHECK(testing::max_abs_diff(t.solve(t.multiply(x)), x) <= 1e-13);
  Tridiagonal singular(3);
  CHECK_THROWS(singular.solve(Vec{1.0, 2.0, 3.0}));
}

TEST_CASE("B and dissipation") {
  ProblemSpec spec = testing::small_spec(3, 2.0, 2.0, 2.0);
  spec.eps_reg = 0.0;
  const Vec zero(3, 0.0);
  CHECK(b_apply(0.0, zero, spec) == zero);
  CHECK(dissipation(0.0, zero, spec) == 0.0);

  const Vec v{0.3, -1.2, 2.0};
  CHECK(b_apply(0.0, v, spec) == v);
  CHECK(dissipation(0.0, v, spec) == doctest::Approx(norm_pow_h(v, 2.0, spec.grid.h)));

  spec.exponents.m = 3.0;
  CHECK(dissipation(0.0, Vec(3, 1.0), spec) == doctest::Approx(0.75).epsilon(1e-15));

  testing::Rng rng(21);
  spec = testing::small_spec(25, 2.0, 3.0, 2.0);
  spec.damping.shape = SpatialShape::bump;
  spec.damping.temporal_sigma = 0.5;
  for (int rep = 0; rep < 100; ++rep)
    CHECK(dissipation(rng.uniform(0, 10), rng.vector(25, -3, 3), spec) >= 0.0);
}

TEST_CASE("(A1) canonical bound holds with k0 = p + 1") {
  testing::Rng rng(22);
  const double h = 1.0 / 21.0;
  for (double ell : {1.5, 2.0, 3.0}) {
    for (double p : {0.5, 1.0, 2.0}) {
      for (int rep = 0; rep < 50; ++rep) {
        const Vec v = rng.vector(20, -2, 2);
        const Vec pv = p_apply(v, ell, 0.0);
        const double lhs = (p + 1.0) * inner_h(pv, v, h) - p * p_potential(v, ell, h);
        const double closed = (p + 1.0 - p / ell) * norm_pow_h(v, ell, h);
        CHECK(testing::rel_diff(lhs, closed) <= 1e-12);
        CHECK(lhs <= (p + 1.0) * norm_pow_h(pv, ell / (ell - 1.0), h) * (1.0 + 1e-12));
      }
    }
  }
}
