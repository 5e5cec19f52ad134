#include "decaylab/assumptions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "decaylab/operators.hpp"

namespace decaylab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::skipped:
      return "SKIPPED";
  }
  return "UNKNOWN";
}

FieldSampler::FieldSampler(const Grid& grid, std::uint64_t seed) : grid_(grid), engine_(seed) {}

double FieldSampler::uniform() {
  // 53 random bits; independent of the standard library's distribution code
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Vec FieldSampler::next() {
  const int modes = 1 + static_cast<int>(engine_() % 5);
  std::vector<double> amp(static_cast<std::size_t>(modes));
  for (auto& a : amp) a = 2.0 * uniform() - 1.0;
  Vec f(grid_.n, 0.0);
  for (std::size_t i = 0; i < grid_.n; ++i) {
    const double x = grid_.node(i) / grid_.length;
    double s = 0.0;
    for (int k = 0; k < modes; ++k) s += amp[static_cast<std::size_t>(k)] * std::sin((k + 1) * std::numbers::pi * x);
    f[i] = s;
  }
  return f;
}

namespace {

double norm_h(std::span<const double> z, double p, double h) { return std::pow(norm_pow_h(z, p, h), 1.0 / p); }

ConditionResult pass(std::string note = {}) { return ConditionResult{Verdict::pass, std::move(note), std::nullopt}; }

ConditionResult fail(Witness w, std::string note) { return ConditionResult{Verdict::fail, std::move(note), std::move(w)}; }

}  // namespace

ConstantEstimates estimate_constants(const ProblemSpec& spec, const SampleSettings& settings) {
  if (settings.count < 100) throw std::invalid_argument("estimate_constants: sample_count must be at least 100");
  const auto& ex = spec.exponents;
  const double h = spec.grid.h;
  const double ell_conj = ex.ell_conj();
  const double m_conj = ex.m_conj();

  ConstantEstimates est;
  est.rho_conj = settings.rho_conj > 0.0 ? settings.rho_conj : ell_conj;
  est.eta_closed_form = spec.damping.sup(0.0);

  // the constants are properties of the exact maps
  ProblemSpec exact = spec;
  exact.eps_reg = 0.0;

  FieldSampler sampler(spec.grid, settings.seed);
  Vec worst_eta_field;
  double worst_eta_ratio = 0.0;
  for (std::size_t s = 0; s < settings.count; ++s) {
    const Vec v = sampler.next();
    const Vec pv = p_apply(v, ex.ell, 0.0);
    const double pv_norm = norm_h(pv, ell_conj, h);
    if (pv_norm > 0.0) {
      const double ratio = norm_h(pv, est.rho_conj, h) / pv_norm;
      est.delta_emp = std::max(est.delta_emp, std::pow(ratio, ex.ell));
    }
    const Vec b = b_apply(0.0, v, exact);
    const double diss = inner_h(b, v, h);
    if (!(diss > 0.0)) {
      ++est.skipped;
      continue;
    }
    ++est.samples;
    est.j_emp = std::max(est.j_emp, norm_pow_h(pv, ell_conj, h) / std::pow(diss, ex.ell / ex.m));
    const double eta = std::pow(norm_h(b, m_conj, h) / std::pow(diss, 1.0 / m_conj), ex.m);
    if (eta > worst_eta_ratio) {
      worst_eta_ratio = eta;
      worst_eta_field = v;
    }
  }
  if (est.samples == 0) throw DegenerateSamples("estimate_constants: every sample has zero dissipation (b == 0)");
  est.eta_emp = worst_eta_ratio;

  const double sigma = spec.damping.temporal_sigma;
  est.delta_profile = PowerProfile{est.delta_emp, 0.0};
  est.eta_profile = PowerProfile{est.eta_emp, sigma};
  est.j_profile = PowerProfile{est.j_emp, sigma == 0.0 ? 0.0 : -sigma * ex.ell / ex.m};
  // j(t) is largest where b is smallest on the horizon
  if (sigma < 0.0 && settings.horizon > 0.0) est.j_emp = est.j_profile(settings.horizon);

  if (std::isfinite(est.delta_emp) && std::isfinite(est.j_emp))
    est.a2 = pass("W' realized as the discrete rho'-norm, rho' = " + std::to_string(est.rho_conj));
  else
    est.a2 = ConditionResult{Verdict::fail, "non-finite delta or j estimate", std::nullopt};

  if (est.eta_emp <= est.eta_closed_form * (1.0 + 1e-9))
    est.a3 = pass("B measured in the dual-m norm; eta(t) <= sup_x b(t,x)");
  else
    est.a3 = fail(Witness{0.0, worst_eta_field, est.eta_emp, est.eta_closed_form},
                  "empirical eta exceeds sup_x b(0,x)");
  return est;
}

OperatorChecks check_a1_a4(const ProblemSpec& spec, const SampleSettings& settings, std::optional<double> k0) {
  if (settings.count < 100) throw std::invalid_argument("check_a1_a4: sample_count must be at least 100");
  const auto& ex = spec.exponents;
  const double h = spec.grid.h;
  const double p = ex.p_a1;
  const double ell_conj = ex.ell_conj();

  OperatorChecks out;
  out.k0 = k0.value_or(p + 1.0);
  out.samples = settings.count;
  out.a1_margin = std::numeric_limits<double>::infinity();
  out.a4_margin = std::numeric_limits<double>::infinity();
  out.a1 = pass("k0 = " + std::to_string(out.k0));
  out.a4 = pass();

  FieldSampler vs(spec.grid, settings.seed);
  FieldSampler us(spec.grid, settings.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t s = 0; s < settings.count; ++s) {
    const Vec v = vs.next();
    const Vec pv = p_apply(v, ex.ell, 0.0);
    const double pair = inner_h(pv, v, h);
    const double pot = p_potential(v, ex.ell, h);
    const double star = p_star(v, ex.ell, h);
    const double lhs = (p + 1.0) * pair - p * pot;
    const double rhs = out.k0 * norm_pow_h(pv, ell_conj, h);
    if (rhs > 0.0) out.a1_margin = std::min(out.a1_margin, (rhs - lhs) / rhs);
    if (out.a1.verdict == Verdict::pass) {
      if (star < -1e-12 * std::abs(pair))
        out.a1 = fail(Witness{0.0, v, star, 0.0}, "P*(v) < 0");
      else if (lhs > rhs * (1.0 + 1e-12))
        out.a1 = fail(Witness{0.0, v, lhs, rhs}, "(p+1)<P(v),v> - p P(v) exceeds k0 ||P(v)||^{ell'}");
    }

    const Vec u = us.next();
    const double apot = a_potential(u, ex.q, spec.a, h, 0.0);
    if (!(apot > 0.0)) continue;
    const Vec au = a_apply(u, ex.q, spec.a, h, 0.0);
    const double pairing = inner_h(au, u, h);
    const double margin = (pairing - ex.q * apot) / (ex.q * apot);
    out.a4_margin = std::min(out.a4_margin, margin);
    out.c0_emp = std::max(out.c0_emp, norm_pow_h(gradients(u, h), ex.q, h) / apot);
    if (out.a4.verdict == Verdict::pass && margin < -1e-10)
      out.a4 = fail(Witness{0.0, u, ex.q * apot, pairing}, "q A(u) exceeds <A(u), u>");
  }
  if (out.a4.verdict == Verdict::pass) out.a4.note = "c0 = " + std::to_string(out.c0_emp);
  return out;
}

WeightChecks check_b1_b4(const ResolvedWeights& w, const Exponents& ex, double horizon, std::size_t t_samples) {
  if (!(horizon > 0.0)) throw std::invalid_argument("check_b1_b4: horizon must be positive");
  if (t_samples < 50) throw std::invalid_argument("check_b1_b4: need at least 50 time samples");
  const double ell = ex.ell;
  const double m = ex.m;
  const double mc = ex.m_conj();

  WeightChecks out;
  out.t_samples = t_samples;
  out.horizon = horizon;
  out.b1 = pass();
  out.b2 = pass();
  out.b3 = pass();

  // alpha delta^(1/ell) / lambda = C (1+t)^kappa
  const double kappa = w.alpha.theta + w.delta.theta / ell - w.lambda.theta;
  const double coeff = w.alpha.c * std::pow(w.delta.c, 1.0 / ell) / w.lambda.c;
  const double ratio_exp = w.alpha.theta - w.lambda.theta;

  const bool b4_applies = m > ell;
  double b4_growth = 0.0;
  if (b4_applies) b4_growth = w.j.theta * m / (m - ell) - w.eta.theta * mc / m;
  out.b4 = b4_applies ? pass() : ConditionResult{Verdict::skipped, "m = ell: exponent m/(m-ell) undefined", std::nullopt};

  for (std::size_t i = 0; i < t_samples; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(t_samples - 1);

    const double lam = w.lambda(t);
    const double rhs1 = w.alpha(t) * std::max(std::pow(w.eta(t), mc / m), std::pow(w.delta(t), 1.0 / ell));
    if (out.b1.verdict == Verdict::pass && lam < rhs1 * (1.0 - 1e-12))
      out.b1 = fail(Witness{t, {}, lam, rhs1}, "lambda(t) < alpha(t) max{eta^(m'/m), delta^(1/ell)}");

    const double deriv = kappa == 0.0 ? 0.0 : coeff * kappa * std::pow(1.0 + t, kappa - 1.0);
    if (out.b2.verdict == Verdict::pass && deriv > 0.0)
      out.b2 = fail(Witness{t, {}, deriv, 0.0}, "(alpha delta^(1/ell) / lambda)' > 0");

    const double b3 = std::abs(ratio_exp) / (1.0 + t) * std::pow(w.delta(t), 1.0 / ell);
    out.c_alpha_lambda = std::max(out.c_alpha_lambda, b3);

    if (b4_applies) {
      const double eta_pow = std::pow(w.eta(t), mc / m);
      const double b4 = eta_pow > 0.0 ? std::pow(w.j(t), m / (m - ell)) / eta_pow : std::numeric_limits<double>::infinity();
      out.c_j_eta = std::max(out.c_j_eta, b4);
      if (out.b4.verdict == Verdict::pass && !std::isfinite(b4))
        out.b4 = fail(Witness{t, {}, b4, 0.0}, "eta vanishes; j^(m/(m-ell)) / eta^(m'/m) unbounded");
    }
  }

  const bool b3_grows = ratio_exp != 0.0 && w.delta.theta / ell - 1.0 > 0.0;
  if (!std::isfinite(out.c_alpha_lambda) || b3_grows) {
    const double t = horizon;
    out.b3 = fail(Witness{t, {}, std::abs(ratio_exp) / (1.0 + t) * std::pow(w.delta(t), 1.0 / ell), out.c_alpha_lambda},
                  "(lambda/alpha)|(alpha/lambda)'| delta^(1/ell) unbounded on [0, inf)");
  }
  if (b4_applies && out.b4.verdict == Verdict::pass && b4_growth > 0.0) {
    const double t = horizon;
    const double val = std::pow(w.j(t), m / (m - ell)) / std::pow(w.eta(t), mc / m);
    out.b4 = fail(Witness{t, {}, val, out.c_j_eta}, "j^(m/(m-ell)) / eta^(m'/m) unbounded on [0, inf)");
  }
  return out;
}

bool AssumptionReport::all_pass() const {
  auto ok = [](const ConditionResult& c) { return c.verdict != Verdict::fail; };
  if (!constants) return false;
  return ok(constants->a2) && ok(constants->a3) && ok(operators.a1) && ok(operators.a4) && ok(weights.b1) &&
         ok(weights.b2) && ok(weights.b3) && ok(weights.b4);
}

}  // namespace decaylab
