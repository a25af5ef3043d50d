#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "tbgeo/geodesic.hpp"
#include "tbgeo/verify.hpp"

namespace {

using nlohmann::json;
using namespace tbgeo;

constexpr const char* kToolVersion = "tbgeo 1.0.0";
constexpr std::uint64_t kDefaultSeed = 20270405;

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
  }
  std::vector<double> get_list(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing config key: " + key);
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has a non-numeric entry: " + item);
      }
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
    return out;
  }
  std::vector<std::string> get_names(const std::string& key, const std::string& fallback) const {
    std::vector<std::string> out;
    std::stringstream ss(get(key, fallback));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    cfg.kv[key] = value;
  }
  return cfg;
}

void require_known_keys(const Config& cfg, const std::vector<std::string>& known) {
  for (const auto& [key, value] : cfg.kv) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown config key: " + key);
  }
}

void require_command(const Config& cfg, const std::string& command) {
  if (cfg.has("command") && cfg.get("command", "") != command)
    throw ConfigError("config declares command '" + cfg.get("command", "") +
                      "' but '" + command + "' was invoked");
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> out;
};

// The output path is where the report lands, not an input to the
// computation, so it stays out of the echo to keep reports byte-identical
// across destinations.
json config_echo(const Config& cfg, const Overrides& ov) {
  json echo = json::object();
  for (const auto& [key, value] : cfg.kv)
    if (key != "out") echo[key] = value;
  if (ov.seed) echo["seed"] = std::to_string(*ov.seed);
  if (ov.tol) echo["tol"] = std::to_string(*ov.tol);
  return echo;
}

void emit_report(const json& report, const std::optional<std::string>& out_path) {
  if (out_path && !out_path->empty()) {
    std::ofstream out(*out_path);
    if (!out) throw ConfigError("cannot write report to: " + *out_path);
    out << report.dump(2) << "\n";
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

json assemble_report(const Config& cfg, const Overrides& ov,
                     const std::vector<verify::CheckReport>& checks) {
  json doc;
  doc["config"] = config_echo(cfg, ov);
  doc["config"]["tool_version"] = kToolVersion;
  json arr = json::array();
  bool all_pass = true;
  double max_residual = 0.0;
  for (const auto& check : checks) {
    arr.push_back(verify::check_report_to_json(check));
    all_pass = all_pass && check.pass;
    max_residual = std::max(max_residual, check.max_residual);
  }
  doc["checks"] = arr;
  doc["summary"] = {{"pass", all_pass}, {"max_residual", max_residual}};
  return doc;
}

MetricWeights weights_from(const Config& cfg, const std::string& key) {
  if (!cfg.has(key)) return MetricWeights{1.0, 0.0, 1.0};
  const auto values = cfg.get_list(key);
  if (values.size() != 3)
    throw ConfigError("config key '" + key + "' must hold three values m1,m2,m3");
  return validate_weights(values[0], values[1], values[2]);
}

int run_verify(const Config& cfg, const Overrides& ov) {
  require_command(cfg, "verify");
  require_known_keys(cfg, {"command", "manifold", "dim", "checks", "weights", "seed", "tol",
                           "out"});

  const auto manifold = verify::parse_manifold(cfg.get("manifold", "sphere2_stereographic"));
  const int dim = static_cast<int>(cfg.get_double("dim", 2));
  const std::uint64_t seed = ov.seed.value_or(cfg.get_u64("seed", kDefaultSeed));
  const MetricWeights weights = weights_from(cfg, "weights");

  std::vector<std::string> names = cfg.get_names("checks", "all");
  if (names.size() == 1 && names[0] == "all") names = verify::check_names();
  for (const auto& name : names)
    if (std::find(verify::check_names().begin(), verify::check_names().end(), name) ==
        verify::check_names().end())
      throw ConfigError("unknown check: " + name);

  std::vector<verify::CheckReport> reports;
  std::uint64_t check_seed = seed;
  for (const auto& name : names) {
    verify::CheckSpec spec = verify::default_spec(name, manifold, check_seed++);
    spec.dim = dim;
    spec.weights = weights;
    if (ov.tol) spec.tolerance = *ov.tol;
    else if (cfg.has("tol")) spec.tolerance = cfg.get_double("tol", spec.tolerance);
    reports.push_back(verify::run_check(spec));
  }

  const json doc = assemble_report(cfg, ov, reports);
  emit_report(doc, ov.out ? ov.out : std::optional<std::string>(cfg.get("out", "")));
  return doc["summary"]["pass"].get<bool>() ? 0 : 1;
}

int run_sweep(const Config& cfg, const Overrides& ov) {
  require_command(cfg, "sweep");
  require_known_keys(cfg, {"command", "manifold", "dim", "checks", "m1_values", "m2_values",
                           "m3_values", "seed", "tol", "out"});

  const auto manifold = verify::parse_manifold(cfg.get("manifold", "sphere2_stereographic"));
  const int dim = static_cast<int>(cfg.get_double("dim", 2));
  const std::uint64_t seed = ov.seed.value_or(cfg.get_u64("seed", kDefaultSeed));
  const auto m1s = cfg.get_list("m1_values");
  const auto m2s = cfg.get_list("m2_values");
  const auto m3s = cfg.get_list("m3_values");
  const auto names = cfg.get_names("checks", "positive_definite,koszul_items");

  struct Cell {
    double m1, m2, m3;
    std::uint64_t seed;
    std::string tag;
  };
  std::vector<Cell> cells;
  std::uint64_t index = 0;
  for (double m1 : m1s)
    for (double m2 : m2s)
      for (double m3 : m3s) {
        std::ostringstream tag;
        tag << "cell[" << m1 << "," << m2 << "," << m3 << "]";
        cells.push_back({m1, m2, m3, seed + index, tag.str()});
        index += names.size();
      }

  auto run_cell = [&](const Cell& cell) {
    std::vector<verify::CheckReport> out;
    try {
      const MetricWeights w = validate_weights(cell.m1, cell.m2, cell.m3);
      std::uint64_t check_seed = cell.seed;
      for (const auto& name : names) {
        verify::CheckSpec spec = verify::default_spec(name, manifold, check_seed++);
        spec.check_id = name + "/" + cell.tag;
        spec.dim = dim;
        spec.weights = w;
        // Sweep cells trade depth for breadth.
        spec.sample_count = std::max(4, spec.sample_count / 10);
        if (ov.tol) spec.tolerance = *ov.tol;
        else if (cfg.has("tol")) spec.tolerance = cfg.get_double("tol", spec.tolerance);
        out.push_back(verify::run_check(spec));
      }
    } catch (const AdmissibilityError& err) {
      verify::CheckReport skipped;
      skipped.check_id = "skipped_inadmissible/" + cell.tag;
      skipped.pass = true;
      skipped.max_residual = 0.0;
      skipped.samples_run = 0;
      skipped.worst_case_inputs = {{"skipped", true},
                                   {"reason", err.what()},
                                   {"failed_condition", err.failed_condition}};
      skipped.seed = cell.seed;
      out.push_back(skipped);
    }
    return out;
  };

  // Cells are independent pure computations; per-cell seeds keep the result
  // identical however the batches land.
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<verify::CheckReport> reports;
  for (size_t base = 0; base < cells.size(); base += workers) {
    std::vector<std::future<std::vector<verify::CheckReport>>> futures;
    const size_t end = std::min(cells.size(), base + workers);
    for (size_t i = base; i < end; ++i)
      futures.push_back(std::async(std::launch::async, run_cell, cells[i]));
    for (auto& f : futures)
      for (auto& report : f.get()) reports.push_back(std::move(report));
  }

  const json doc = assemble_report(cfg, ov, reports);
  emit_report(doc, ov.out ? ov.out : std::optional<std::string>(cfg.get("out", "")));
  return doc["summary"]["pass"].get<bool>() ? 0 : 1;
}

int run_geodesic(const Config& cfg, const Overrides& ov) {
  require_command(cfg, "geodesic");
  require_known_keys(cfg, {"command", "manifold", "weights", "R0", "omega0", "zeta0", "eta0",
                           "duration", "step", "integrator", "energy_tol", "output_stride",
                           "seed", "tol", "out"});

  if (cfg.get("manifold", "so3") != "so3")
    throw ConfigError("geodesic integration is only available on manifold = so3");
  const std::string integrator = cfg.get("integrator", "rk4");
  if (integrator != "rk4") throw ConfigError("unknown integrator: " + integrator);

  so3::GeodesicConfig gc;
  gc.weights = weights_from(cfg, "weights");
  if (cfg.has("R0") && cfg.get("R0", "") != "identity") {
    const auto r = cfg.get_list("R0");
    if (r.size() != 9) throw ConfigError("R0 must be 'identity' or nine comma-separated values");
    gc.r0 << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
  }
  auto vec3 = [&cfg](const std::string& key, const Eigen::Vector3d& fallback) {
    if (!cfg.has(key)) return fallback;
    const auto v = cfg.get_list(key);
    if (v.size() != 3) throw ConfigError(key + " must hold three values");
    return Eigen::Vector3d(v[0], v[1], v[2]);
  };
  gc.omega0 = vec3("omega0", Eigen::Vector3d::Zero());
  gc.zeta0 = vec3("zeta0", Eigen::Vector3d::Zero());
  gc.eta0 = vec3("eta0", Eigen::Vector3d::Zero());
  gc.duration = cfg.get_double("duration", 10.0);
  gc.step = cfg.get_double("step", 1e-3);
  if (!(gc.step > 0.0)) throw ConfigError("step must be positive");
  const double energy_tol = ov.tol.value_or(cfg.get_double("energy_tol", 1e-6));
  const auto stride = static_cast<size_t>(cfg.get_double("output_stride", 1));
  if (stride < 1) throw ConfigError("output_stride must be at least 1");

  const auto trajectory = so3::integrate_geodesic(gc);

  const double e0 = trajectory.front().energy;
  double drift = 0.0;
  for (const auto& sample : trajectory)
    drift = std::max(drift, std::abs(sample.energy - e0) / std::max(std::abs(e0), 1e-12));

  const std::string out_path = ov.out.value_or(cfg.get("out", "trajectory.csv"));
  std::ofstream csv(out_path);
  if (!csv) throw ConfigError("cannot write trajectory to: " + out_path);
  csv.precision(17);
  csv << "t,R00,R01,R02,R10,R11,R12,R20,R21,R22,u0,u1,u2,energy\n";
  for (size_t i = 0; i < trajectory.size(); ++i) {
    if (i % stride != 0 && i + 1 != trajectory.size()) continue;
    const auto& s = trajectory[i];
    csv << s.t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) csv << "," << s.r(r, c);
    for (int k = 0; k < 3; ++k) csv << "," << s.omega[k];
    csv << "," << s.energy << "\n";
  }

  std::cout << "geodesic: " << trajectory.size() - 1 << " steps, energy drift " << drift
            << " (tolerance " << energy_tol << "), trajectory written to " << out_path << "\n";
  if (drift > energy_tol) {
    std::cerr << "geodesic: relative energy drift " << drift << " exceeds " << energy_tol
              << "\n";
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical kernel for weighted tangent-bundle metrics"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::uint64_t seed_value = 0;
  double tol_value = 0.0;
  std::string out_value;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "path to a key = value config file")->required();
    cmd->add_option("--seed", seed_value, "override the config seed");
    cmd->add_option("--tol", tol_value, "override every tolerance");
    cmd->add_option("--out", out_value, "override the output path");
  };

  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification checks");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run checks over a weight grid");
  CLI::App* geodesic_cmd = app.add_subcommand("geodesic", "integrate a bundle geodesic on TSO(3)");
  add_common(verify_cmd);
  add_common(sweep_cmd);
  add_common(geodesic_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (verify_cmd->count("--seed") || sweep_cmd->count("--seed") || geodesic_cmd->count("--seed"))
    ov.seed = seed_value;
  if (verify_cmd->count("--tol") || sweep_cmd->count("--tol") || geodesic_cmd->count("--tol"))
    ov.tol = tol_value;
  if (verify_cmd->count("--out") || sweep_cmd->count("--out") || geodesic_cmd->count("--out"))
    ov.out = out_value;

  try {
    const Config cfg = load_config(config_path);
    if (verify_cmd->parsed()) return run_verify(cfg, ov);
    if (sweep_cmd->parsed()) return run_sweep(cfg, ov);
    if (geodesic_cmd->parsed()) return run_geodesic(cfg, ov);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const AdmissibilityError& e) {
    std::cerr << "config error: " << e.what() << " (failed condition: " << e.failed_condition
              << ")\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
