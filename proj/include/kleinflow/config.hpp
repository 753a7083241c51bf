#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kleinflow/amplitude.hpp"
#include "kleinflow/dispersion.hpp"
#include "kleinflow/errors.hpp"

namespace kleinflow {

enum class ScenarioMode { plane, packet };
enum class FieldMode { direct, grid };

/// One run description; mirrors the config file keys one-to-one.
struct ScenarioConfig {
  double kappa{1.0};
  double V{0.0};
  ScenarioMode mode{ScenarioMode::plane};
  double k{0.0};       // plane
  double K{0.0};       // packet center
  double Delta{0.0};   // packet width
  double t_min{0.0}, t_max{0.0}, x_min{0.0}, x_max{0.0};
  int n_trajectories{16};
  double coverage{0.9};
  double start_time{0.0};
  bool start_time_set{false};
  double rel_tol{1e-8};
  double abs_tol{1e-10};
  double max_step{5.0};
  double density_floor_rel{1e-10};
  int k_order{256};
  double quad_tol{1e-10};
  int spatial_order{24};
  double spatial_panel{8.0};
  std::string out_dir{"."};
  std::vector<double> density_times;
  int grid_points{400};
  FieldMode field_mode{FieldMode::direct};
  double grid_dx{1.0};
  double grid_dt{1.0};

  PhysicalParams params() const { return {kappa, V}; }
};

namespace detail {

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "physics.kappa", "physics.V",
      "mode.type", "mode.k", "mode.K", "mode.Delta",
      "window.t_min", "window.t_max", "window.x_min", "window.x_max",
      "trajectories.count", "trajectories.coverage", "trajectories.start_time",
      "trajectories.rel_tol", "trajectories.abs_tol", "trajectories.max_step",
      "trajectories.density_floor_rel",
      "quadrature.k_order", "quadrature.tol", "quadrature.spatial_order",
      "quadrature.spatial_panel",
      "output.dir", "output.density_times", "output.grid_points", "output.field_mode",
      "output.grid_dx", "output.grid_dt",
  };
  return keys;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

inline int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  return i;
}

}  // namespace detail

/// Parses the sectioned key=value format. '#' starts a comment; unknown keys
/// are errors; later assignments override earlier ones.
inline ScenarioConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    kv[key] = value;
  }

  ScenarioConfig cfg;
  auto has = [&](const char* k) { return kv.count(k) != 0; };
  auto num = [&](const char* k, double dflt) { return has(k) ? detail::to_double(k, kv[k]) : dflt; };
  auto require = [&](const char* k) {
    if (!has(k)) throw ConfigError(std::string("missing required key '") + k + "'");
    return kv[std::string(k)];
  };

  cfg.kappa = num("physics.kappa", 1.0);
  cfg.V = detail::to_double("physics.V", require("physics.V"));
  const std::string mode = require("mode.type");
  if (mode == "plane") cfg.mode = ScenarioMode::plane;
  else if (mode == "packet") cfg.mode = ScenarioMode::packet;
  else throw ConfigError("mode.type must be 'plane' or 'packet', got '" + mode + "'");

  cfg.t_min = detail::to_double("window.t_min", require("window.t_min"));
  cfg.t_max = detail::to_double("window.t_max", require("window.t_max"));
  cfg.x_min = detail::to_double("window.x_min", require("window.x_min"));
  cfg.x_max = detail::to_double("window.x_max", require("window.x_max"));

  if (cfg.mode == ScenarioMode::plane) {
    cfg.k = detail::to_double("mode.k", require("mode.k"));
  } else {
    cfg.K = detail::to_double("mode.K", require("mode.K"));
    cfg.Delta = detail::to_double("mode.Delta", require("mode.Delta"));
  }

  cfg.n_trajectories = detail::to_int("trajectories.count", has("trajectories.count") ? kv["trajectories.count"] : "16");
  cfg.coverage = num("trajectories.coverage", 0.9);
  if (has("trajectories.start_time")) {
    cfg.start_time = detail::to_double("trajectories.start_time", kv["trajectories.start_time"]);
    cfg.start_time_set = true;
  } else {
    cfg.start_time = cfg.mode == ScenarioMode::plane ? 0.0 : cfg.t_min;
  }
  cfg.rel_tol = num("trajectories.rel_tol", 1e-8);
  cfg.abs_tol = num("trajectories.abs_tol", 1e-10);
  cfg.max_step = num("trajectories.max_step", 5.0);
  cfg.density_floor_rel = num("trajectories.density_floor_rel", 1e-10);

  cfg.k_order = detail::to_int("quadrature.k_order", has("quadrature.k_order") ? kv["quadrature.k_order"] : "256");
  cfg.quad_tol = num("quadrature.tol", 1e-10);
  cfg.spatial_order = detail::to_int("quadrature.spatial_order", has("quadrature.spatial_order") ? kv["quadrature.spatial_order"] : "24");
  cfg.spatial_panel = num("quadrature.spatial_panel", 8.0);

  if (has("output.dir")) cfg.out_dir = kv["output.dir"];
  if (has("output.density_times")) {
    std::istringstream ts(kv["output.density_times"]);
    std::string tok;
    while (std::getline(ts, tok, ',')) {
      tok = detail::trim(tok);
      if (!tok.empty()) cfg.density_times.push_back(detail::to_double("output.density_times", tok));
    }
  }
  cfg.grid_points = detail::to_int("output.grid_points", has("output.grid_points") ? kv["output.grid_points"] : "400");
  if (has("output.field_mode")) {
    const std::string fm = kv["output.field_mode"];
    if (fm == "direct") cfg.field_mode = FieldMode::direct;
    else if (fm == "grid") cfg.field_mode = FieldMode::grid;
    else throw ConfigError("output.field_mode must be 'direct' or 'grid', got '" + fm + "'");
  }
  cfg.grid_dx = num("output.grid_dx", 1.0);
  cfg.grid_dt = num("output.grid_dt", 1.0);
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Physics/window checks shared by both subcommands. Throws ConfigError or
/// DomainError (both are configuration failures for the CLI).
inline void validate_config(const ScenarioConfig& cfg) {
  if (!(cfg.kappa > 0.0)) throw ConfigError("physics.kappa must be > 0");
  if (!(cfg.t_min < cfg.t_max) || !(cfg.x_min < cfg.x_max)) {
    throw ConfigError("window is empty: require t_min < t_max and x_min < x_max");
  }
  if (cfg.n_trajectories < 0) throw ConfigError("trajectories.count must be >= 0");
  if (!(cfg.coverage > 0.0 && cfg.coverage < 1.0)) {
    throw ConfigError("trajectories.coverage must lie in (0,1)");
  }
  if (cfg.grid_points < 2) throw ConfigError("output.grid_points must be >= 2");
  const PhysicalParams p = cfg.params();
  if (cfg.mode == ScenarioMode::plane) {
    make_step_mode(cfg.k, p);  // DomainError when outside the Klein regime
  } else {
    require_step_window(gaussian_amplitude(cfg.K, cfg.Delta), p);
  }
}

/// Canonical one-line-per-key form used for the digest embedded in outputs.
inline std::string canonical_config(const ScenarioConfig& cfg) {
  std::ostringstream s;
  s.precision(17);
  s << "kappa=" << cfg.kappa << ";V=" << cfg.V << ";mode="
    << (cfg.mode == ScenarioMode::plane ? "plane" : "packet");
  if (cfg.mode == ScenarioMode::plane) s << ";k=" << cfg.k;
  else s << ";K=" << cfg.K << ";Delta=" << cfg.Delta;
  s << ";window=" << cfg.t_min << "," << cfg.t_max << "," << cfg.x_min << "," << cfg.x_max
    << ";count=" << cfg.n_trajectories << ";coverage=" << cfg.coverage
    << ";start_time=" << cfg.start_time << ";rel_tol=" << cfg.rel_tol
    << ";abs_tol=" << cfg.abs_tol << ";max_step=" << cfg.max_step
    << ";density_floor_rel=" << cfg.density_floor_rel << ";k_order=" << cfg.k_order
    << ";quad_tol=" << cfg.quad_tol << ";spatial_order=" << cfg.spatial_order
    << ";spatial_panel=" << cfg.spatial_panel << ";grid_points=" << cfg.grid_points
    << ";field_mode=" << (cfg.field_mode == FieldMode::direct ? "direct" : "grid")
    << ";grid_dx=" << cfg.grid_dx << ";grid_dt=" << cfg.grid_dt << ";density_times=";
  for (double t : cfg.density_times) s << t << ",";
  return s.str();
}

inline std::string config_digest(const ScenarioConfig& cfg) {
  const std::string text = canonical_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kleinflow
