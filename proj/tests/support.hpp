#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "decaylab/model.hpp"

namespace testing {

/// Uniform doubles in [lo, hi) from a seeded engine.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53); }

  decaylab::Vec vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    decaylab::Vec v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  std::uint64_t bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_abs_diff(const decaylab::Vec& a, const decaylab::Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline decaylab::ProblemSpec small_spec(std::size_t n, double ell, double m, double q) {
  decaylab::ProblemSpec spec;
  spec.grid = decaylab::build_grid(n, 1.0);
  spec.exponents = {ell, m, q, 1.0};
  return spec;
}

}  // namespace testing
