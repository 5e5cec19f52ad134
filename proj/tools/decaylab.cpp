#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <thread>

#include "decaylab/config.hpp"
#include "decaylab/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy decay experiments for doubly nonlinear damped wave equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<double> ell, m, q, b0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Override the sampling seed");
  };
  CLI::App* run = app.add_subcommand("run", "Simulate, check assumptions and fit the decay rate");
  CLI::App* sweep = app.add_subcommand("sweep", "Run the configured parameter grid");
  CLI::App* verify = app.add_subcommand("verify", "Assumption checks and solver self-tests only");
  add_common(run);
  add_common(sweep);
  add_common(verify);
  sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--ell", ell, "Override the ell list")->delimiter(',');
  sweep->add_option("--m", m, "Override the m list")->delimiter(',');
  sweep->add_option("--q", q, "Override the q list")->delimiter(',');
  sweep->add_option("--b0", b0, "Override the b0 list")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  decaylab::RunConfig cfg;
  try {
    cfg = decaylab::parse_config(config_path);
  } catch (const decaylab::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return decaylab::exit_error;
  }
  if (seed) cfg.seed = *seed;

  try {
    if (run->parsed()) return decaylab::cmd_run(cfg, out_dir, std::cerr);
    if (verify->parsed()) return decaylab::cmd_verify(cfg, out_dir, std::cerr);
    auto override_list = [&](const std::string& name, const std::vector<double>& values, std::vector<double>& slot) {
      if (sweep->count("--" + name) == 0) return;
      if (!cfg.sweep.present) {
        cfg.sweep.present = true;
        cfg.sweep.ell = {cfg.spec.exponents.ell};
        cfg.sweep.m = {cfg.spec.exponents.m};
        cfg.sweep.q = {cfg.spec.exponents.q};
        cfg.sweep.b0 = {cfg.spec.damping.b0};
      }
      slot = values;
    };
    override_list("ell", ell, cfg.sweep.ell);
    override_list("m", m, cfg.sweep.m);
    override_list("q", q, cfg.sweep.q);
    override_list("b0", b0, cfg.sweep.b0);
    return decaylab::cmd_sweep(cfg, out_dir, workers, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return decaylab::exit_error;
  }
}
