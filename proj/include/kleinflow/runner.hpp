#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "kleinflow/bohmian.hpp"
#include "kleinflow/config.hpp"
#include "kleinflow/csv.hpp"
#include "kleinflow/diagnostics.hpp"
#include "kleinflow/svg.hpp"

namespace kleinflow {

/// Runs the identity suites and writes one line per identity; returns true
/// iff every residual is within tolerance.
inline bool run_identities(const IdentitySuiteConfig& cfg, std::ostream& out) {
  const auto results = run_identity_suite(cfg);
  bool all_pass = true;
  for (const auto& r : results) {
    out << (r.pass ? "  ok   " : "  FAIL ") << r.name << "  max residual " << r.max_residual
        << " (tol " << r.tolerance << ")\n";
    all_pass = all_pass && r.pass;
  }
  out << (all_pass ? "all identities passed\n" : "identity failures present\n");
  return all_pass;
}

struct RunSettingsComment {
  const ScenarioConfig& cfg;
  unsigned threads;
  std::uint64_t seed;
};

inline void write_provenance(CsvWriter& csv, const RunSettingsComment& rs) {
  csv.comment("config digest " + config_digest(rs.cfg));
  csv.comment("settings k_order=" + std::to_string(rs.cfg.k_order) +
              " quad_tol=" + format_g17(rs.cfg.quad_tol) +
              " spatial_order=" + std::to_string(rs.cfg.spatial_order) +
              " spatial_panel=" + format_g17(rs.cfg.spatial_panel) +
              " rel_tol=" + format_g17(rs.cfg.rel_tol) +
              " abs_tol=" + format_g17(rs.cfg.abs_tol) +
              " max_step=" + format_g17(rs.cfg.max_step) +
              " seed=" + std::to_string(rs.seed));
  if (rs.cfg.field_mode == FieldMode::grid) {
    csv.comment("field grid interpolation: dt=" + format_g17(rs.cfg.grid_dt) +
                " dx=" + format_g17(rs.cfg.grid_dx));
  }
}

struct PlaneRunResult {
  std::string csv_path;
  std::string svg_path;
  double max_x0_deviation{0.0};
  std::size_t n_samples{0};
};

/// Figure-1 style run: one plane-mode trajectory through (start_time, 0),
/// integrated forward and backward over the time window, against the closed
/// form.
inline PlaneRunResult run_plane(const ScenarioConfig& cfg, unsigned threads = 1,
                                std::uint64_t seed = 0) {
  validate_config(cfg);
  if (cfg.mode != ScenarioMode::plane) throw ConfigError("run_plane requires mode.type=plane");
  const StepMode mode = make_step_mode(cfg.k, cfg.params());
  const StepModeFlow field{mode};
  const double tau = cfg.start_time;

  IntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = cfg.abs_tol;
  icfg.max_step = cfg.max_step;
  icfg.osc_k = cfg.k;

  std::vector<SpacetimePoint> samples;
  if (tau > cfg.t_min) {
    icfg.t_start = tau;
    icfg.t_end = cfg.t_min;
    auto back = integrate_trajectory(field, {tau, 0.0}, icfg);
    samples.assign(back.samples.rbegin(), back.samples.rend());
  }
  if (tau < cfg.t_max) {
    icfg.t_start = tau;
    icfg.t_end = cfg.t_max;
    auto fwd = integrate_trajectory(field, {tau, 0.0}, icfg);
    if (!samples.empty()) samples.pop_back();  // (tau, 0) appears in both halves
    samples.insert(samples.end(), fwd.samples.begin(), fwd.samples.end());
  }

  std::filesystem::create_directories(cfg.out_dir);
  PlaneRunResult res;
  res.csv_path = cfg.out_dir + "/plane.csv";
  res.svg_path = cfg.out_dir + "/plane.svg";
  res.n_samples = samples.size();

  CsvWriter csv(res.csv_path);
  write_provenance(csv, {cfg, threads, seed});
  csv.comment("plane mode: k=" + format_g17(cfg.k) + " q=" + format_g17(mode.q) +
              " r=" + format_g17(mode.r) + " t=" + format_g17(mode.t));
  csv.header({"x1", "x0_closed", "x0_ode"});
  std::vector<std::pair<double, double>> ode_pts, closed_pts;
  for (const auto& s : samples) {
    const double x0_cf = closed_form_trajectory(mode, tau, s.x1);
    res.max_x0_deviation = std::max(res.max_x0_deviation, std::abs(x0_cf - s.x0));
    csv.row({s.x1, x0_cf, s.x0});
    ode_pts.push_back({s.x1, s.x0});
    closed_pts.push_back({s.x1, x0_cf});
  }

  SvgPlot plot(cfg.x_min, cfg.x_max, cfg.t_min, cfg.t_max,
               "step-mode trajectory, k=" + format_g17(cfg.k) + ", V=" + format_g17(cfg.V),
               "kappa x1", "kappa x0");
  plot.vline(0.0, "#888888");
  plot.polyline(ode_pts, "#1f77b4", 1.5);
  plot.polyline(closed_pts, "#d62728", 1.2, "6,4");
  plot.write(res.svg_path);
  return res;
}

struct PacketRunResult {
  std::string densities_path;
  std::string trajectories_path;
  std::string reports_path;
  std::string svg_path;
  std::vector<SpacetimePoint> starts;
  std::vector<Trajectory> trajectories;
  RTBudget budget{};
  double norm_sq{0.0};
  int transmitted{0};
  double mean_late_velocity_transmitted{0.0};
  double mean_early_velocity{0.0};
};

/// Figure-2/3 style run: density snapshots, a quantile-start Bohmian
/// ensemble through the packet current, localization/R-T bookkeeping, and a
/// trajectory plot over the spacetime window.
inline PacketRunResult run_packet(const ScenarioConfig& cfg, unsigned threads = 1,
                                  std::uint64_t seed = 0) {
  validate_config(cfg);
  if (cfg.mode != ScenarioMode::packet) throw ConfigError("run_packet requires mode.type=packet");
  const PhysicalParams p = cfg.params();
  const AmplitudeProfile a = gaussian_amplitude(cfg.K, cfg.Delta);
  QuadConfig qc;
  qc.base_order = cfg.k_order;
  qc.tol = cfg.quad_tol;
  PacketField field(PacketKind::step_in, a, p, qc);

  std::filesystem::create_directories(cfg.out_dir);
  PacketRunResult res;
  res.densities_path = cfg.out_dir + "/densities.csv";
  res.reports_path = cfg.out_dir + "/reports.csv";
  res.svg_path = cfg.out_dir + "/trajectories.svg";
  res.norm_sq = normsq_kspace(a, p);
  res.budget = rt_budget(a, p);

  // (a) density snapshots
  {
    std::vector<double> taus = cfg.density_times;
    if (taus.empty()) taus = {cfg.start_time, 0.0, cfg.t_max};
    CsvWriter csv(res.densities_path);
    write_provenance(csv, {cfg, threads, seed});
    csv.header({"tau", "x1", "j0", "j1"});
    const int n = cfg.grid_points;
    std::vector<CurrentVector> row(n);
    for (double tau : taus) {
      parallel_for(n, threads, [&](std::size_t i) {
        const double x = cfg.x_min + (cfg.x_max - cfg.x_min) * static_cast<double>(i) / (n - 1);
        row[i] = field.current({tau, x});
      });
      for (int i = 0; i < n; ++i) {
        const double x = cfg.x_min + (cfg.x_max - cfg.x_min) * static_cast<double>(i) / (n - 1);
        csv.row({tau, x, row[i].j0, row[i].j1});
      }
    }
  }

  // (b) trajectory ensemble
  if (cfg.n_trajectories > 0) {
    res.starts = pick_starts(field, cfg.start_time, cfg.n_trajectories, cfg.coverage);
    double peak_start_density = 0.0;
    for (const auto& s : res.starts) {
      peak_start_density = std::max(peak_start_density, field.current(s).j0);
    }
    IntegratorConfig icfg;
    icfg.rel_tol = cfg.rel_tol;
    icfg.abs_tol = cfg.abs_tol;
    icfg.max_step = cfg.max_step;
    icfg.density_floor = cfg.density_floor_rel * peak_start_density;
    icfg.osc_k = a.k2;
    icfg.t_start = cfg.start_time;
    icfg.t_end = cfg.t_max;

    if (cfg.field_mode == FieldMode::grid) {
      GridVelocityField grid(field, cfg.t_min, cfg.t_max, cfg.x_min, cfg.x_max, cfg.grid_dt,
                             cfg.grid_dx, threads);
      res.trajectories = batch_trajectories(grid, res.starts, icfg, threads);
    } else {
      res.trajectories = batch_trajectories(field, res.starts, icfg, threads);
    }

    res.trajectories_path = cfg.out_dir + "/trajectories.csv";
    CsvWriter csv(res.trajectories_path);
    write_provenance(csv, {cfg, threads, seed});
    csv.header({"traj_id", "x0", "x1"});
    for (std::size_t id = 0; id < res.trajectories.size(); ++id) {
      for (const auto& s : res.trajectories[id].samples) {
        csv.row({static_cast<double>(id), s.x0, s.x1});
      }
    }

    const double t_late = cfg.t_max - 0.1 * (cfg.t_max - cfg.start_time);
    const double t_early = cfg.start_time + 0.1 * (cfg.t_max - cfg.start_time);
    double v_trans = 0.0, v_early = 0.0;
    for (const auto& tr : res.trajectories) {
      if (tr.samples.size() < 2) continue;
      v_early += (interp_x1(tr, t_early) - tr.samples.front().x1) / (t_early - cfg.start_time);
      if (tr.samples.back().x1 > 0.0) {
        ++res.transmitted;
        v_trans += (interp_x1(tr, cfg.t_max) - interp_x1(tr, t_late)) / (cfg.t_max - t_late);
      }
    }
    res.mean_early_velocity = v_early / static_cast<double>(res.trajectories.size());
    if (res.transmitted > 0) {
      res.mean_late_velocity_transmitted = v_trans / res.transmitted;
    }
  }

  // (c) reports
  {
    const SpatialQuad sq{cfg.spatial_panel, cfg.spatial_order, 1e-7};
    const double span = std::max(std::abs(cfg.t_min), std::abs(cfg.t_max)) + 120.0;
    const double mass_minus_start =
        mass_in_interval(field, cfg.start_time, -span, 0.0, sq) / res.norm_sq;
    const double mass_plus_end =
        mass_in_interval(field, cfg.t_max, 0.0, span, sq) / res.norm_sq;

    CsvWriter csv(res.reports_path);
    write_provenance(csv, {cfg, threads, seed});
    csv.header({"metric", "value"});
    auto metric = [&](const std::string& name, double value) {
      csv.row_cells({name, format_g17(value)});
    };
    metric("norm_sq", res.norm_sq);
    metric("R", res.budget.R);
    metric("T", res.budget.T);
    metric("R_plus_T", res.budget.R + res.budget.T);
    metric("mass_Mminus_at_start", mass_minus_start);
    metric("mass_Mplus_at_tmax", mass_plus_end);
    metric("n_trajectories", cfg.n_trajectories);
    if (cfg.n_trajectories > 0) {
      metric("n_transmitted", res.transmitted);
      metric("transmitted_fraction",
             static_cast<double>(res.transmitted) / cfg.n_trajectories);
      metric("mean_early_velocity", res.mean_early_velocity);
      metric("mean_late_velocity_transmitted", res.mean_late_velocity_transmitted);
    }
  }

  // (d) figure
  {
    SvgPlot plot(cfg.x_min, cfg.x_max, cfg.t_min, cfg.t_max,
                 "Bohmian trajectories, K=" + format_g17(cfg.K) + ", Delta=" +
                     format_g17(cfg.Delta) + ", V=" + format_g17(cfg.V),
                 "kappa x1", "kappa x0");
    plot.vline(0.0, "#888888");
    for (const auto& tr : res.trajectories) {
      std::vector<std::pair<double, double>> pts;
      pts.reserve(tr.samples.size());
      for (const auto& s : tr.samples) pts.push_back({s.x1, s.x0});
      const bool transmitted = !tr.samples.empty() && tr.samples.back().x1 > 0.0;
      plot.polyline(pts, transmitted ? "#1f77b4" : "#d62728", 1.0);
    }
    plot.write(res.svg_path);
  }
  return res;
}

}  // namespace kleinflow
