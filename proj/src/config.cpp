#include "decaylab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace decaylab {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) schema_error(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) schema_error(path + "/" + key, "unknown key");
  }
}

double read_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) schema_error(path + "/" + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(path + "/" + key, "expected a finite number");
  return x;
}

std::size_t read_count(const json& obj, const std::string& key, const std::string& path, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(path + "/" + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

bool read_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) schema_error(path + "/" + key, "expected a boolean");
  return v.get<bool>();
}

std::string read_string(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) schema_error(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& section(const json& doc, const std::string& key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

PowerProfile read_profile(const json& obj, const std::string& path, PowerProfile fallback) {
  check_keys(obj, path, {"c", "theta"});
  return PowerProfile{read_number(obj, "c", path, fallback.c), read_number(obj, "theta", path, fallback.theta)};
}

WeightSlot read_slot(const json& weights, const std::string& key, const std::string& path) {
  WeightSlot slot;
  if (!weights.contains(key)) return slot;
  const json& v = weights.at(key);
  const std::string p = path + "/" + key;
  if (v.is_string()) {
    if (v.get<std::string>() != "empirical") schema_error(p, "expected \"empirical\" or {\"c\", \"theta\"}");
    return slot;
  }
  slot.empirical = false;
  slot.profile = read_profile(v, p, PowerProfile{});
  return slot;
}

InitialShape read_shape(const json& obj, const std::string& key, const std::string& path, InitialShape fallback) {
  if (!obj.contains(key)) return fallback;
  const std::string tag = read_string(obj, key, path, "");
  if (tag == "zero") return InitialShape::zero;
  if (tag == "sine") return InitialShape::sine;
  if (tag == "sine2") return InitialShape::sine_mode2;
  if (tag == "bump") return InitialShape::bump;
  schema_error(path + "/" + key, "unknown profile tag \"" + tag + "\" (zero, sine, sine2, bump)");
}

const char* shape_tag(InitialShape s) {
  switch (s) {
    case InitialShape::zero:
      return "zero";
    case InitialShape::sine:
      return "sine";
    case InitialShape::sine_mode2:
      return "sine2";
    case InitialShape::bump:
      return "bump";
  }
  return "zero";
}

std::vector<double> read_list(const json& obj, const std::string& key, const std::string& path,
                              std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) schema_error(path + "/" + key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema_error(path + "/" + key + "/" + std::to_string(i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

json profile_json(const PowerProfile& p) { return json{{"c", p.c}, {"theta", p.theta}}; }

json slot_json(const WeightSlot& s) { return s.empirical ? json("empirical") : profile_json(s.profile); }

}  // namespace

RunConfig parse_config_json(const json& doc) {
  check_keys(doc, "",
             {"grid", "exponents", "a", "damping", "weights", "initial", "time", "eps_reg", "newton", "lyapunov",
              "analysis", "seed", "outputs", "sweep"});
  RunConfig cfg;
  ProblemSpec& spec = cfg.spec;

  const json& grid = section(doc, "grid");
  check_keys(grid, "/grid", {"n", "length"});
  const std::size_t n = read_count(grid, "n", "/grid", 200);
  const double length = read_number(grid, "length", "/grid", 1.0);
  spec.grid = build_grid(n, length);

  const json& ex = section(doc, "exponents");
  check_keys(ex, "/exponents", {"ell", "m", "q", "p_a1"});
  spec.exponents.ell = read_number(ex, "ell", "/exponents", 2.0);
  spec.exponents.m = read_number(ex, "m", "/exponents", 2.0);
  spec.exponents.q = read_number(ex, "q", "/exponents", 2.0);
  spec.exponents.p_a1 = read_number(ex, "p_a1", "/exponents", 1.0);

  spec.a = read_number(doc, "a", "", 1.0);

  const json& damp = section(doc, "damping");
  check_keys(damp, "/damping", {"b0", "spatial", "temporal_sigma"});
  spec.damping.b0 = read_number(damp, "b0", "/damping", 1.0);
  spec.damping.temporal_sigma = read_number(damp, "temporal_sigma", "/damping", 0.0);
  if (damp.contains("spatial")) {
    const json& sp = damp.at("spatial");
    if (sp.is_string()) {
      if (sp.get<std::string>() == "uniform")
        spec.damping.shape = SpatialShape::uniform;
      else if (sp.get<std::string>() == "bump")
        spec.damping.shape = SpatialShape::bump;
      else
        schema_error("/damping/spatial", "expected \"uniform\", \"bump\" or a bump object");
    } else {
      check_keys(sp, "/damping/spatial", {"type", "center", "width"});
      if (read_string(sp, "type", "/damping/spatial", "bump") != "bump")
        schema_error("/damping/spatial/type", "only \"bump\" takes parameters");
      spec.damping.shape = SpatialShape::bump;
      spec.damping.bump_center = read_number(sp, "center", "/damping/spatial", 0.5 * length);
      spec.damping.bump_width = read_number(sp, "width", "/damping/spatial", 0.5 * length);
    }
  }

  const json& weights = section(doc, "weights");
  check_keys(weights, "/weights", {"lambda", "alpha", "delta", "eta", "j"});
  if (weights.contains("lambda")) spec.weights.lambda = read_profile(weights.at("lambda"), "/weights/lambda", {});
  if (weights.contains("alpha")) spec.weights.alpha = read_profile(weights.at("alpha"), "/weights/alpha", {});
  spec.weights.delta = read_slot(weights, "delta", "/weights");
  spec.weights.eta = read_slot(weights, "eta", "/weights");
  spec.weights.j = read_slot(weights, "j", "/weights");

  const json& init = section(doc, "initial");
  check_keys(init, "/initial", {"psi", "phi", "amplitude"});
  spec.initial.psi = read_shape(init, "psi", "/initial", InitialShape::sine);
  spec.initial.phi = read_shape(init, "phi", "/initial", InitialShape::zero);
  spec.initial.amplitude = read_number(init, "amplitude", "/initial", 1.0);

  const json& time = section(doc, "time");
  check_keys(time, "/time", {"dt", "t_end", "record_every", "snapshot_every"});
  spec.dt = read_number(time, "dt", "/time", 1e-3);
  spec.t_end = read_number(time, "t_end", "/time", 20.0);
  spec.record_every = read_count(time, "record_every", "/time", 1);
  spec.snapshot_every = read_count(time, "snapshot_every", "/time", 0);

  spec.eps_reg = read_number(doc, "eps_reg", "", 1e-8);

  const json& newton = section(doc, "newton");
  check_keys(newton, "/newton", {"tol", "max_iter"});
  spec.newton.tol = read_number(newton, "tol", "/newton", 1e-12);
  spec.newton.max_iter = static_cast<int>(read_count(newton, "max_iter", "/newton", 50));

  const json& lyap = section(doc, "lyapunov");
  check_keys(lyap, "/lyapunov", {"mu", "nu", "c4", "auto_tune"});
  cfg.lyapunov.mu = read_number(lyap, "mu", "/lyapunov", 0.01);
  if (lyap.contains("nu")) cfg.lyapunov.nu = read_number(lyap, "nu", "/lyapunov", 0.0);
  cfg.lyapunov.c4 = read_number(lyap, "c4", "/lyapunov", 1.0);
  cfg.lyapunov.auto_tune = read_bool(lyap, "auto_tune", "/lyapunov", true);

  const json& an = section(doc, "analysis");
  check_keys(an, "/analysis",
             {"window_fraction", "slope_tolerance", "sample_count", "rho_conj", "t_samples", "eps_sensitivity"});
  cfg.analysis.window_fraction = read_number(an, "window_fraction", "/analysis", 0.5);
  cfg.analysis.slope_tolerance = read_number(an, "slope_tolerance", "/analysis", 0.15);
  cfg.analysis.sample_count = read_count(an, "sample_count", "/analysis", 1000);
  cfg.analysis.rho_conj = read_number(an, "rho_conj", "/analysis", 0.0);
  cfg.analysis.t_samples = read_count(an, "t_samples", "/analysis", 200);
  cfg.analysis.eps_sensitivity = read_bool(an, "eps_sensitivity", "/analysis", true);

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      schema_error("/seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  const json& out = section(doc, "outputs");
  check_keys(out, "/outputs", {"csv", "summary"});
  cfg.outputs.csv = read_string(out, "csv", "/outputs", "trajectory.csv");
  cfg.outputs.summary = read_string(out, "summary", "/outputs", "summary.json");

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    check_keys(sw, "/sweep", {"ell", "m", "q", "b0"});
    cfg.sweep.present = true;
    cfg.sweep.ell = read_list(sw, "ell", "/sweep", {spec.exponents.ell});
    cfg.sweep.m = read_list(sw, "m", "/sweep", {spec.exponents.m});
    cfg.sweep.q = read_list(sw, "q", "/sweep", {spec.exponents.q});
    cfg.sweep.b0 = read_list(sw, "b0", "/sweep", {spec.damping.b0});
  }

  // invariants
  if (!(cfg.analysis.window_fraction > 0.0 && cfg.analysis.window_fraction <= 1.0))
    throw ConfigError("analysis.window_fraction must lie in (0, 1]");
  if (!(cfg.analysis.slope_tolerance >= 0.0 && cfg.analysis.slope_tolerance < 1.0))
    throw ConfigError("analysis.slope_tolerance must lie in [0, 1)");
  if (cfg.analysis.sample_count < 100) throw ConfigError("analysis.sample_count must be at least 100");
  if (cfg.analysis.t_samples < 50) throw ConfigError("analysis.t_samples must be at least 50");
  if (!(cfg.lyapunov.mu >= 0.0)) throw ConfigError("lyapunov.mu must be nonnegative");
  if (cfg.lyapunov.nu && !(*cfg.lyapunov.nu >= 0.0)) throw ConfigError("lyapunov.nu must be nonnegative");
  spec.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config_json(doc);
}

json config_to_json(const RunConfig& cfg) {
  const ProblemSpec& s = cfg.spec;
  json spatial = s.damping.shape == SpatialShape::uniform
                     ? json("uniform")
                     : json{{"type", "bump"}, {"center", s.damping.bump_center}, {"width", s.damping.bump_width}};
  json lyap{{"mu", cfg.lyapunov.mu}, {"c4", cfg.lyapunov.c4}, {"auto_tune", cfg.lyapunov.auto_tune}};
  if (cfg.lyapunov.nu) lyap["nu"] = *cfg.lyapunov.nu;
  json doc{
      {"grid", {{"n", s.grid.n}, {"length", s.grid.length}}},
      {"exponents", {{"ell", s.exponents.ell}, {"m", s.exponents.m}, {"q", s.exponents.q}, {"p_a1", s.exponents.p_a1}}},
      {"a", s.a},
      {"damping", {{"b0", s.damping.b0}, {"spatial", spatial}, {"temporal_sigma", s.damping.temporal_sigma}}},
      {"weights",
       {{"lambda", profile_json(s.weights.lambda)},
        {"alpha", profile_json(s.weights.alpha)},
        {"delta", slot_json(s.weights.delta)},
        {"eta", slot_json(s.weights.eta)},
        {"j", slot_json(s.weights.j)}}},
      {"initial",
       {{"psi", shape_tag(s.initial.psi)}, {"phi", shape_tag(s.initial.phi)}, {"amplitude", s.initial.amplitude}}},
      {"time",
       {{"dt", s.dt}, {"t_end", s.t_end}, {"record_every", s.record_every}, {"snapshot_every", s.snapshot_every}}},
      {"eps_reg", s.eps_reg},
      {"newton", {{"tol", s.newton.tol}, {"max_iter", s.newton.max_iter}}},
      {"lyapunov", lyap},
      {"analysis",
       {{"window_fraction", cfg.analysis.window_fraction},
        {"slope_tolerance", cfg.analysis.slope_tolerance},
        {"sample_count", cfg.analysis.sample_count},
        {"rho_conj", cfg.analysis.rho_conj},
        {"t_samples", cfg.analysis.t_samples},
        {"eps_sensitivity", cfg.analysis.eps_sensitivity}}},
      {"seed", cfg.seed},
      {"outputs", {{"csv", cfg.outputs.csv}, {"summary", cfg.outputs.summary}}},
  };
  if (cfg.sweep.present)
    doc["sweep"] = json{{"ell", cfg.sweep.ell}, {"m", cfg.sweep.m}, {"q", cfg.sweep.q}, {"b0", cfg.sweep.b0}};
  return doc;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace decaylab
