#include "decaylab/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "decaylab/energy.hpp"
#include "decaylab/solver.hpp"

namespace decaylab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kBalanceTolerance = 1e-8;
constexpr double kJacobianTolerance = 1e-5;
constexpr double kOracleTolerance = 1e-3;
constexpr std::size_t kHeadTail = 5;

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return json{{"t", w->t}, {"field", w->field}, {"lhs", w->lhs}, {"rhs", w->rhs}};
}

json condition_json(const ConditionResult& c) {
  return json{{"verdict", to_string(c.verdict)}, {"note", c.note}, {"witness", witness_json(c.witness)}};
}

json profile_json(const PowerProfile& p) { return json{{"c", p.c}, {"theta", p.theta}}; }

json verdict_entry(Verdict v, std::string note = {}) { return json{{"verdict", to_string(v)}, {"note", std::move(note)}}; }

Verdict from_bool(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

SampleSettings sample_settings(const RunConfig& cfg) {
  SampleSettings s;
  s.count = cfg.analysis.sample_count;
  s.seed = cfg.seed;
  s.rho_conj = cfg.analysis.rho_conj;
  s.horizon = cfg.spec.t_end;
  return s;
}

// Assumption checks shared by run and verify. Fills the report and the
// resolved weights; empirical slots fall back to 1 when b == 0.
json assumptions_json(const RunConfig& cfg, ResolvedWeights& resolved, std::vector<std::string>& failures) {
  const ProblemSpec& spec = cfg.spec;
  const SampleSettings settings = sample_settings(cfg);
  AssumptionReport report;
  try {
    report.constants = estimate_constants(spec, settings);
  } catch (const DegenerateSamples& e) {
    report.constants_error = e.what();
  }
  report.operators = check_a1_a4(spec, settings);

  PowerProfile delta{}, eta{}, j{};
  if (report.constants) {
    delta = report.constants->delta_profile;
    eta = report.constants->eta_profile;
    j = report.constants->j_profile;
  }
  resolved = resolve_weights(spec.weights, delta, eta, j);
  report.weights = check_b1_b4(resolved, spec.exponents, spec.t_end > 0.0 ? spec.t_end : 1.0, cfg.analysis.t_samples);

  json out;
  const auto& op = report.operators;
  out["A1"] = condition_json(op.a1);
  out["A1"]["k0"] = op.k0;
  out["A1"]["margin"] = op.a1_margin;
  out["A4"] = condition_json(op.a4);
  out["A4"]["c0"] = op.c0_emp;
  out["A4"]["margin"] = op.a4_margin;
  out["sample_count"] = op.samples;
  out["seed"] = settings.seed;
  if (report.constants) {
    const auto& c = *report.constants;
    out["A2"] = condition_json(c.a2);
    out["A2"]["delta_emp"] = c.delta_emp;
    out["A2"]["j_emp"] = c.j_emp;
    out["A2"]["rho_conj"] = c.rho_conj;
    out["A3"] = condition_json(c.a3);
    out["A3"]["eta_emp"] = c.eta_emp;
    out["A3"]["eta_closed_form"] = c.eta_closed_form;
    out["dissipative_samples"] = c.samples;
    out["skipped_samples"] = c.skipped;
  } else {
    const ConditionResult degenerate{Verdict::fail, report.constants_error, std::nullopt};
    out["A2"] = condition_json(degenerate);
    out["A3"] = condition_json(degenerate);
  }
  const auto& wc = report.weights;
  out["B1"] = condition_json(wc.b1);
  out["B2"] = condition_json(wc.b2);
  out["B3"] = condition_json(wc.b3);
  out["B3"]["c_alpha_lambda"] = wc.c_alpha_lambda;
  out["B4"] = condition_json(wc.b4);
  out["B4"]["c_j_eta"] = wc.c_j_eta;
  out["weights"] = json{{"lambda", profile_json(resolved.lambda)},
                        {"alpha", profile_json(resolved.alpha)},
                        {"delta", profile_json(resolved.delta)},
                        {"eta", profile_json(resolved.eta)},
                        {"j", profile_json(resolved.j)}};
  for (const char* key : {"A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4"}) {
    if (out[key]["verdict"] == "FAIL") failures.push_back(key);
  }
  return out;
}

json energy_json(const Trajectory& traj) {
  auto point = [&](std::size_t k) { return json{{"t", traj.t(k)}, {"E", traj.energy(k)}}; };
  json head = json::array(), tail = json::array();
  const std::size_t n = traj.samples.size();
  for (std::size_t k = 0; k < std::min(kHeadTail, n); ++k) head.push_back(point(k));
  for (std::size_t k = n > kHeadTail ? n - kHeadTail : 0; k < n; ++k) tail.push_back(point(k));
  return json{{"E0", traj.energy(0)}, {"E_final", traj.energy(n - 1)}, {"head", head}, {"tail", tail},
              {"samples", n}, {"status", to_string(traj.status)}};
}

json lyapunov_json(const RunConfig& cfg, const Trajectory& traj, const ResolvedWeights& w, LyapunovParams& params,
                   std::vector<std::string>& failures) {
  const auto& ex = cfg.spec.exponents;
  json out;
  std::optional<EquivalenceReport> eq;
  std::optional<GMonotoneReport> mono;
  std::string note;
  try {
    if (cfg.lyapunov.auto_tune) {
      TuneResult tr = tune_mu(traj, ex, w, cfg.lyapunov.c4);
      json cands = json::array();
      for (const auto& c : tr.candidates)
        cands.push_back(json{{"mu", c.mu}, {"nu", c.nu}, {"k1_emp", c.k1_emp},
                             {"equivalence_violations", c.equivalence_violations},
                             {"monotone_violations", c.monotone_violations}, {"passed", c.passed}});
      out["candidates"] = cands;
      out["tuned"] = tr.found;
      if (tr.found) {
        params = tr.params;
        eq = tr.equivalence;
        mono = tr.monotone;
      } else {
        note = "no mu on the scan grid passes";
      }
    }
    if (!eq) {
      params = make_lyapunov_params(ex, cfg.lyapunov.mu, cfg.lyapunov.c4);
      if (cfg.lyapunov.nu) params.nu = *cfg.lyapunov.nu;
      eq = equivalence_bounds(traj, params, w);
      mono = check_g_monotone(traj, params, w);
    }
  } catch (const std::invalid_argument& e) {
    note = e.what();
  }

  out["mu"] = params.mu;
  out["nu"] = params.nu;
  out["r"] = params.r;
  out["s_g"] = params.s_g();
  out["c4"] = params.c4;
  const bool tune_ok = !cfg.lyapunov.auto_tune || out.value("tuned", false);
  if (eq) {
    out["k1_emp"] = eq->k1_emp;
    out["k2_emp"] = eq->k2_emp;
    out["k1"] = eq->k1;
    out["k2"] = eq->k2;
    out["c1_emp"] = eq->c1_emp;
    out["c_star"] = eq->c_star;
    out["equivalence_violations"] = eq->violations.size();
    out["monotone_violations"] = mono->violations.size();
    out["k4_emp"] = mono->k4_emp;
    out["equivalence"] = verdict_entry(from_bool(eq->passed && tune_ok), note);
    out["g_monotone"] = verdict_entry(from_bool(mono->passed() && tune_ok), note);
  } else {
    out["equivalence"] = verdict_entry(Verdict::fail, note);
    out["g_monotone"] = verdict_entry(Verdict::fail, note);
  }
  double max_rate = 0.0;
  for (double r : cross_term_rate(traj)) max_rate = std::max(max_rate, std::abs(r));
  out["cross_term_rate_max_abs"] = max_rate;
  if (out["equivalence"]["verdict"] == "FAIL") failures.push_back("lyapunov_equivalence");
  if (out["g_monotone"]["verdict"] == "FAIL") failures.push_back("g_monotone");
  return out;
}

json decay_json(const RunConfig& cfg, const Trajectory& traj, std::vector<std::string>& failures) {
  FitSettings fs;
  fs.window_fraction = cfg.analysis.window_fraction;
  fs.slope_tolerance = cfg.analysis.slope_tolerance;
  DecayFit fit;
  try {
    fit = fit_decay(traj, cfg.spec.weights, fs);
  } catch (const std::invalid_argument& e) {
    return verdict_entry(Verdict::skipped, e.what());
  }
  Verdict v = from_bool(fit.passed);
  if (cfg.spec.damping.b0 == 0.0) v = Verdict::skipped;
  if (v == Verdict::fail) failures.push_back("decay_fit");
  return json{{"verdict", to_string(v)},
              {"note", fit.note},
              {"mode", to_string(fit.mode)},
              {"predicted_exponent", fit.predicted_exponent},
              {"fitted_slope", fit.fitted_slope},
              {"fitted_constant", fit.fitted_constant},
              {"t_lo", fit.t_lo},
              {"t_hi", fit.t_hi},
              {"r_squared", fit.r_squared},
              {"samples", fit.samples},
              {"tail_bound_sup", fit.tail_bound_sup},
              {"stability_ratio", fit.stability_ratio}};
}

json eps_sensitivity_json(const ProblemSpec& spec) {
  ProblemSpec base = spec;
  base.t_end = std::min(spec.t_end, 1.0);
  base.record_every = 1;
  base.snapshot_every = 0;
  ProblemSpec alt = base;
  alt.eps_reg = spec.eps_reg == 1e-8 ? 1e-10 : 1e-8;
  json out{{"eps", base.eps_reg}, {"eps_alt", alt.eps_reg}, {"t", base.t_end}};
  try {
    const Trajectory a = run_simulation(base);
    const Trajectory b = run_simulation(alt);
    const std::size_t n = std::min(a.samples.size(), b.samples.size());
    double diff = 0.0;
    for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs(a.energy(k) - b.energy(k)));
    out["E_final"] = a.energy(n - 1);
    out["E_final_alt"] = b.energy(n - 1);
    out["max_relative_difference"] = a.energy(0) > 0.0 ? diff / a.energy(0) : 0.0;
  } catch (const NonConvergence& e) {
    out["error"] = e.what();
  }
  return out;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json verdicts_json(const std::vector<std::string>& failures, json warnings) {
  return json{{"failures", failures}, {"verdict", failures.empty() ? "PASS" : "FAIL"}, {"warnings", warnings}};
}

}  // namespace

std::vector<std::string> config_warnings(const ProblemSpec& spec) {
  std::vector<std::string> out;
  const auto& ex = spec.exponents;
  if (spec.eps_reg == 0.0 && (ex.ell != 2.0 || ex.q < 2.0 || ex.m < 2.0))
    out.push_back("eps_reg = 0 with a singular power map (ell, m or q); Newton may fail");
  return out;
}

RunResult execute_run(const RunConfig& cfg) {
  RunResult res;
  res.warnings = config_warnings(cfg.spec);
  res.traj = run_simulation(cfg.spec);
  const Trajectory& traj = res.traj;

  json summary;
  summary["config"] = config_to_json(cfg);
  summary["config_hash"] = config_hash(cfg);
  summary["energy"] = energy_json(traj);
  summary["solver"] = json{{"total_newton_iters", traj.total_newton_iters},
                           {"retries", traj.retries},
                           {"steps", traj.steps},
                           {"status", to_string(traj.status)}};

  const MonotoneReport mono = check_monotone(traj);
  const Verdict mono_v = from_bool(mono.passed());
  summary["energy"]["monotone"] =
      json{{"verdict", to_string(mono_v)}, {"increases", mono.increases.size()}, {"out_of_range", mono.out_of_range.size()}};
  if (mono_v == Verdict::fail) res.failures.push_back("energy_monotone");

  const BalanceReport bal = balance_residual(traj, cfg.spec);
  const double e0 = traj.energy(0);
  double phys = 0.0;
  for (double r : bal.physical_series) phys = std::max(phys, std::abs(r));
  const Verdict bal_v = from_bool(bal.max_abs <= kBalanceTolerance * e0);
  summary["energy"]["balance"] = json{{"verdict", to_string(bal_v)},
                                      {"max_abs", bal.max_abs},
                                      {"relative", e0 > 0.0 ? bal.max_abs / e0 : 0.0},
                                      {"physical_only_max_abs", phys}};
  if (bal_v == Verdict::fail) res.failures.push_back("energy_balance");

  summary["assumptions"] = assumptions_json(cfg, res.weights, res.failures);
  summary["lyapunov"] = lyapunov_json(cfg, traj, res.weights, res.params, res.failures);
  summary["decay_fit"] = decay_json(cfg, traj, res.failures);
  if (cfg.analysis.eps_sensitivity) summary["eps_sensitivity"] = eps_sensitivity_json(cfg.spec);

  const json verdicts = verdicts_json(res.failures, res.warnings);
  for (const auto& [k, v] : verdicts.items()) summary[k] = v;
  res.summary = std::move(summary);
  return res;
}

void write_trajectory_csv(std::ostream& out, const RunResult& result) {
  const Trajectory& traj = result.traj;
  out << csv_header << '\n';
  double f_prev = 0.0;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const Sample& s = traj.samples[k];
    const EnergyRecord& e = s.energy;
    const double lam = result.weights.lambda(e.t);
    const double h = h_value(e.total, s.cross_term, e.t, result.params, result.weights) / lam;
    const double g = g_value(e.total, s.cross_term, e.t, result.params, result.weights) / lam;
    const double f = f_value(e.total, s.cross_term, e.t, result.params, result.weights);
    const double f_diff = k == 0 ? 0.0 : f - f_prev;
    f_prev = f;
    out << fmt17(e.t) << ',' << fmt17(e.total) << ',' << fmt17(e.kinetic) << ',' << fmt17(e.potential) << ','
        << fmt17(e.cumulative_dissipation) << ',' << fmt17(e.balance_residual) << ',' << fmt17(h) << ','
        << fmt17(g) << ',' << fmt17(s.cross_term) << ',' << fmt17(f_diff) << ',' << s.newton_iters << '\n';
  }
}

void write_summary(std::ostream& out, const json& summary) { out << summary.dump(2) << '\n'; }

int cmd_run(const RunConfig& cfg, const fs::path& out_dir, std::ostream& diag) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path csv_path = out_dir / cfg.outputs.csv;
  const fs::path summary_path = out_dir / cfg.outputs.summary;
  std::ofstream csv, summary;
  try {
    prepare_dir(out_dir);
    csv = open_output(csv_path);
    summary = open_output(summary_path);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  for (const auto& w : config_warnings(cfg.spec)) diag << "warning: " << w << '\n';

  RunResult res;
  try {
    res = execute_run(cfg);
  } catch (const NonConvergence& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  res.summary["wall_time_s"] = seconds_since(start);
  try {
    write_trajectory_csv(csv, res);
    finish_output(csv, csv_path);
    write_summary(summary, res.summary);
    finish_output(summary, summary_path);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  for (const auto& f : res.failures) diag << "FAIL: " << f << '\n';
  return res.passed() ? exit_ok : exit_verdict;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out_dir, unsigned workers, std::ostream& diag) {
  const SweepGrid& grid = cfg.sweep;
  if (!grid.present) {
    diag << "sweep: no sweep grid configured; nothing to do\n";
    return exit_ok;
  }
  const std::size_t total = grid.ell.size() * grid.m.size() * grid.q.size() * grid.b0.size();
  if (total > max_sweep_size) {
    diag << "error: sweep grid has " << total << " combinations; the limit is " << max_sweep_size << '\n';
    return exit_error;
  }
  if (total == 0) {
    diag << "sweep: empty grid; nothing to do\n";
    return exit_ok;
  }
  try {
    prepare_dir(out_dir);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }

  struct Row {
    double ell{0.0}, m{0.0}, q{0.0}, b0{0.0};
    double predicted{std::nan("")};
    double slope{std::nan("")};
    std::string verdict;
    std::string message;
  };
  std::vector<Row> rows;
  for (double ell : grid.ell)
    for (double m : grid.m)
      for (double q : grid.q)
        for (double b0 : grid.b0) {
          Row row;
          row.ell = ell;
          row.m = m;
          row.q = q;
          row.b0 = b0;
          rows.push_back(row);
        }

  std::atomic<std::size_t> next{0};
  std::mutex diag_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Row& row = rows[i];
      RunConfig c = cfg;
      c.sweep = SweepGrid{};
      c.spec.exponents.ell = row.ell;
      c.spec.exponents.m = row.m;
      c.spec.exponents.q = row.q;
      c.spec.damping.b0 = row.b0;
      json summary;
      const auto start = std::chrono::steady_clock::now();
      try {
        c.spec.validate();
        RunResult res = execute_run(c);
        summary = std::move(res.summary);
        const json& fit = summary["decay_fit"];
        if (fit.contains("fitted_slope")) {
          row.slope = fit["fitted_slope"].get<double>();
          if (!fit["predicted_exponent"].is_null()) row.predicted = fit["predicted_exponent"].get<double>();
        }
        row.verdict = res.passed() ? "PASS" : "FAIL";
      } catch (const ConfigError& e) {
        row.verdict = "INVALID";
        row.message = e.what();
      } catch (const NonConvergence& e) {
        row.verdict = "ERROR";
        row.message = e.what();
      }
      if (summary.is_null()) {
        summary = json{{"config", config_to_json(c)}, {"verdict", row.verdict}, {"error", row.message}};
      }
      summary["wall_time_s"] = seconds_since(start);
      const fs::path path = out_dir / ("summary_" + std::to_string(i) + ".json");
      try {
        std::ofstream out = open_output(path);
        write_summary(out, summary);
        finish_output(out, path);
      } catch (const std::exception& e) {
        row.verdict = "ERROR";
        row.message = e.what();
      }
      if (!row.message.empty()) {
        std::lock_guard lock(diag_mutex);
        diag << "combo " << i << ": " << row.verdict << ": " << row.message << '\n';
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows.size())));
  std::vector<std::jthread> pool;
  for (unsigned k = 0; k < n_workers; ++k) pool.emplace_back(worker);
  pool.clear();

  const fs::path table = out_dir / "rates.csv";
  bool any_fail = false;
  try {
    std::ofstream out = open_output(table);
    out << "ell,m,q,b0,predicted_exponent,fitted_slope,verdict\n";
    for (const Row& r : rows) {
      out << fmt17(r.ell) << ',' << fmt17(r.m) << ',' << fmt17(r.q) << ',' << fmt17(r.b0) << ','
          << fmt17(r.predicted) << ',' << fmt17(r.slope) << ',' << r.verdict << '\n';
      any_fail = any_fail || r.verdict != "PASS";
    }
    finish_output(out, table);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  return any_fail ? exit_verdict : exit_ok;
}

int cmd_verify(const RunConfig& cfg, const fs::path& out_dir, std::ostream& diag) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path summary_path = out_dir / cfg.outputs.summary;
  std::ofstream summary_out;
  try {
    prepare_dir(out_dir);
    summary_out = open_output(summary_path);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  const std::vector<std::string> warnings = config_warnings(cfg.spec);
  for (const auto& w : warnings) diag << "warning: " << w << '\n';

  std::vector<std::string> failures;
  bool solver_error = false;
  json summary;
  summary["config"] = config_to_json(cfg);
  summary["config_hash"] = config_hash(cfg);
  ResolvedWeights resolved;
  summary["assumptions"] = assumptions_json(cfg, resolved, failures);

  {
    ProblemSpec small = cfg.spec;
    small.grid = build_grid(8, cfg.spec.grid.length);
    std::mt19937_64 rng(cfg.seed);
    auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    State s;
    s.u.resize(8);
    s.w.resize(8);
    Vec v(8);
    for (std::size_t i = 0; i < 8; ++i) {
      s.u[i] = draw();
      s.w[i] = draw();
      v[i] = draw();
    }
    const double dt = small.dt;
    const Tridiagonal jac = step_jacobian(s, v, dt, small);
    double max_err = 0.0, max_entry = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(v[j]));
      Vec vp = v, vm = v;
      vp[j] += step;
      vm[j] -= step;
      const Vec rp = step_residual(s, vp, dt, small);
      const Vec rm = step_residual(s, vm, dt, small);
      Vec e(8, 0.0);
      e[j] = 1.0;
      const Vec col = jac.multiply(e);
      for (std::size_t i = 0; i < 8; ++i) {
        const double fd = (rp[i] - rm[i]) / (2.0 * step);
        max_err = std::max(max_err, std::abs(fd - col[i]));
        max_entry = std::max(max_entry, std::abs(col[i]));
      }
    }
    const double rel = max_entry > 0.0 ? max_err / max_entry : max_err;
    const Verdict v_jac = from_bool(rel <= kJacobianTolerance);
    summary["jacobian"] = json{{"verdict", to_string(v_jac)}, {"relative_error", rel}, {"n", 8}};
    if (v_jac == Verdict::fail) failures.push_back("jacobian");
  }

  {
    ProblemSpec small = cfg.spec;
    small.grid = build_grid(32, cfg.spec.grid.length);
    small.t_end = 1.0;
    small.dt = 1e-4;
    small.record_every = 100;
    small.snapshot_every = 0;
    json oracle{{"n", 32}, {"t_end", 1.0}, {"dt", small.dt}, {"refinement", 100}};
    try {
      const Trajectory a = run_simulation(small);
      const Trajectory b = oracle_run(small, 100);
      const std::size_t n = std::min(a.samples.size(), b.samples.size());
      double diff = 0.0;
      for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs(a.energy(k) - b.energy(k)));
      const double e0 = a.energy(0);
      const double rel = e0 > 0.0 ? diff / e0 : diff;
      oracle["max_relative_difference"] = rel;
      oracle["verdict"] = to_string(from_bool(rel <= kOracleTolerance));
      if (rel > kOracleTolerance) failures.push_back("oracle");
    } catch (const NonConvergence& e) {
      diag << "error: " << e.what() << '\n';
      oracle["verdict"] = to_string(Verdict::fail);
      oracle["note"] = e.what();
      failures.push_back("oracle");
      solver_error = true;
    } catch (const OracleDiverged& e) {
      oracle["verdict"] = to_string(Verdict::skipped);
      oracle["note"] = e.what();
    }
    summary["oracle"] = oracle;
  }

  const json verdicts = verdicts_json(failures, warnings);
  for (const auto& [k, v] : verdicts.items()) summary[k] = v;
  summary["wall_time_s"] = seconds_since(start);
  try {
    write_summary(summary_out, summary);
    finish_output(summary_out, summary_path);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_error;
  }
  for (const auto& f : failures) diag << "FAIL: " << f << '\n';
  if (solver_error) return exit_error;
  return failures.empty() ? exit_ok : exit_verdict;
}

}  // namespace decaylab
