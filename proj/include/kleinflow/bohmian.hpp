#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "kleinflow/errors.hpp"
#include "kleinflow/parallel.hpp"
#include "kleinflow/quadrature.hpp"
#include "kleinflow/spinor.hpp"
#include "kleinflow/step_modes.hpp"
#include "kleinflow/wave_packets.hpp"

namespace kleinflow {

enum class TrajectoryStatus { completed, aborted_low_density, aborted_step_limit };

struct TrajectoryStats {
  std::size_t steps{0};
  std::size_t rejected{0};
  double max_error_estimate{0.0};  // largest accepted local error (absolute)
  double error_estimate{0.0};      // accumulated local errors, global-error proxy
};

/// Integral curve of dx1/dx0 = j1/j0, sampled at the accepted steps.
struct Trajectory {
  std::vector<SpacetimePoint> samples;
  SpacetimePoint start{};
  TrajectoryStatus status{TrajectoryStatus::completed};
  TrajectoryStats stats{};
};

struct IntegratorConfig {
  double rel_tol{1e-8};
  double abs_tol{1e-10};
  double max_step{5.0};
  double density_floor{0.0};  // absolute j0 floor; 0 disables the check
  double t_start{0.0};
  double t_end{0.0};
  // Near |x1| < 2*pi/osc_k the time step is capped at 0.1/osc_k so the
  // standing-wave oscillation at the step is resolved; 0 disables the cap.
  double osc_k{0.0};
  std::size_t max_steps{2'000'000};
};

/// Linear interpolation of x1 along a trajectory at time x0 (samples are
/// strictly monotone in x0 in either direction).
inline double interp_x1(const Trajectory& traj, double x0) {
  const auto& s = traj.samples;
  if (s.size() < 2) return s.empty() ? 0.0 : s.front().x1;
  const bool fwd = s.back().x0 >= s.front().x0;
  auto cmp = [fwd](const SpacetimePoint& a, double t) { return fwd ? a.x0 < t : a.x0 > t; };
  auto it = std::lower_bound(s.begin(), s.end(), x0, cmp);
  if (it == s.begin()) ++it;
  if (it == s.end()) --it;
  const auto& p1 = *(it - 1);
  const auto& p2 = *it;
  const double w = (x0 - p1.x0) / (p2.x0 - p1.x0);
  return p1.x1 + w * (p2.x1 - p1.x1);
}

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double dp_err[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

}  // namespace detail

/// Adaptive RK5(4) integration of the velocity field from (t_start, start.x1)
/// to t_end (either direction). Field must provide
/// FlowSample flow(double x0, double x1) with the velocity j1/j0 and j0.
template <typename Field>
Trajectory integrate_trajectory(const Field& field, const SpacetimePoint& start,
                                const IntegratorConfig& cfg) {
  Trajectory traj;
  traj.start = start;
  const double dir = cfg.t_end >= cfg.t_start ? 1.0 : -1.0;
  const double span = std::abs(cfg.t_end - cfg.t_start);
  if (span == 0.0) {
    traj.samples.push_back(start);
    return traj;
  }

  double t = cfg.t_start;
  double y = start.x1;
  FlowSample f0 = field.flow(t, y);
  if (cfg.density_floor > 0.0 && f0.j0 <= cfg.density_floor) {
    throw InvalidStart("density " + std::to_string(f0.j0) + " at start is below floor " +
                       std::to_string(cfg.density_floor));
  }
  traj.samples.push_back({t, y});

  auto local_cap = [&](double x1) {
    double cap = cfg.max_step;
    if (cfg.osc_k > 0.0 && std::abs(x1) < 2.0 * M_PI / cfg.osc_k) {
      cap = std::min(cap, 0.1 / cfg.osc_k);
    }
    return cap;
  };

  double h = dir * std::min(local_cap(y), std::max(1e-6, span / 100.0));
  double err_prev = 1.0;
  const double safety = 0.9;

  while (dir * (cfg.t_end - t) > 0.0) {
    if (traj.stats.steps + traj.stats.rejected >= cfg.max_steps) {
      traj.status = TrajectoryStatus::aborted_step_limit;
      return traj;
    }
    h = dir * std::min(std::abs(h), local_cap(y));
    if (dir * (t + h - cfg.t_end) > 0.0) h = cfg.t_end - t;

    double ks[7];
    ks[0] = f0.velocity;
    FlowSample f_last{};
    for (int s = 1; s < 7; ++s) {
      double acc = 0.0;
      for (int j = 0; j < s; ++j) acc += detail::dp_a[s][j] * ks[j];
      f_last = field.flow(t + detail::dp_c[s] * h, y + h * acc);
      ks[s] = f_last.velocity;
    }
    double y_new = y;
    for (int j = 0; j < 6; ++j) y_new += h * detail::dp_a[6][j] * ks[j];
    double err_abs = 0.0;
    for (int j = 0; j < 7; ++j) err_abs += detail::dp_err[j] * ks[j];
    err_abs = std::abs(h * err_abs);
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y), std::abs(y_new));
    const double err = err_abs / scale;

    if (err <= 1.0) {
      t += h;
      y = y_new;
      f0 = f_last;  // FSAL: stage 7 is evaluated at (t+h, y_new)
      traj.samples.push_back({t, y});
      ++traj.stats.steps;
      traj.stats.max_error_estimate = std::max(traj.stats.max_error_estimate, err_abs);
      traj.stats.error_estimate += err_abs;
      if (cfg.density_floor > 0.0 && f0.j0 <= cfg.density_floor) {
        traj.status = TrajectoryStatus::aborted_low_density;
        return traj;
      }
      const double e = std::max(err, 1e-10);
      double fac = safety * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = e;
      h *= fac;
    } else {
      ++traj.stats.rejected;
      const double fac = std::clamp(safety * std::pow(err, -0.2), 0.1, 0.9);
      h *= fac;
      if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(t))) {
        traj.status = TrajectoryStatus::aborted_step_limit;
        return traj;
      }
    }
  }
  traj.status = TrajectoryStatus::completed;
  return traj;
}

/// Independent integration of many starts; per-trajectory status, the batch
/// itself never throws for start-density failures.
template <typename Field>
std::vector<Trajectory> batch_trajectories(const Field& field,
                                           const std::vector<SpacetimePoint>& starts,
                                           const IntegratorConfig& cfg,
                                           unsigned n_threads = 1) {
  std::vector<Trajectory> out(starts.size());
  parallel_for(starts.size(), n_threads, [&](std::size_t i) {
    try {
      out[i] = integrate_trajectory(field, starts[i], cfg);
    } catch (const InvalidStart&) {
      out[i].start = starts[i];
      out[i].samples = {starts[i]};
      out[i].status = TrajectoryStatus::aborted_low_density;
    }
  });
  return out;
}

/// Velocity field of a single plane step mode (closed-form current).
struct StepModeFlow {
  StepMode mode;
  FlowSample flow(double x0, double x1) const {
    const CurrentVector j = current_step_mode(mode, {x0, x1});
    return {j.j1 / j.j0, j.j0};
  }
};

/// Start positions at time tau placed on density quantiles covering the
/// central `coverage` probability mass; n = 1 gives the median.
inline std::vector<SpacetimePoint> pick_starts(const PacketField& field, double tau, int n,
                                               double coverage) {
  if (n < 1) throw DomainError(DomainFault::bad_argument, "need n >= 1 starts");
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw DomainError(DomainFault::bad_argument, "coverage must lie in (0, 1)");
  }
  std::vector<double> levels;
  if (n == 1) {
    levels.push_back(0.5);
  } else {
    const double lo = 0.5 * (1.0 - coverage);
    for (int i = 0; i < n; ++i) {
      levels.push_back(lo + coverage * static_cast<double>(i) / (n - 1));
    }
  }

  // Center of localization from the k-space mean group velocity.
  const AmplitudeProfile& a = field.profile();
  auto wfn = [&](double k) {
    return std::norm(a.eval(k)) / (2.0 * omega_bar(k, field.params()));
  };
  const auto& rule = *gauss_legendre_cached(256);
  const double mass_k = integrate(wfn, a.k1, a.k2, rule);
  if (!(mass_k > 0.0)) throw ZeroNorm("amplitude has zero norm");
  const double vbar =
      integrate([&](double k) { return wfn(k) * group_velocity(k, field.params()); }, a.k1,
                a.k2, rule) /
      mass_k;
  const double center = vbar * tau;

  // Expand the window until the edge density is negligible.
  const auto& panel_rule = *gauss_legendre_cached(12);
  const double panel = 2.0;
  double width = 50.0;
  std::vector<double> edges, cum;
  double peak = 0.0;
  for (;; width *= 2.0) {
    if (width > 12800.0) {
      throw WindowTooSmall("pick_starts: no window with negligible edge density");
    }
    const std::size_t half_panels = static_cast<std::size_t>(std::ceil(width / panel));
    edges.assign(2 * half_panels + 1, 0.0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = center - panel * static_cast<double>(half_panels) + panel * i;
    }
    peak = 0.0;
    cum.assign(edges.size(), 0.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      double m = integrate(
          [&](double x) {
            const double j0 = field.current({tau, x}).j0;
            peak = std::max(peak, j0);
            return j0;
          },
          edges[i], edges[i + 1], panel_rule);
      cum[i + 1] = cum[i] + m;
    }
    const double lo_edge = field.current({tau, edges.front()}).j0;
    const double hi_edge = field.current({tau, edges.back()}).j0;
    if (lo_edge < 1e-7 * peak && hi_edge < 1e-7 * peak) break;
  }

  const double total = cum.back();
  std::vector<SpacetimePoint> starts;
  starts.reserve(levels.size());
  for (double lev : levels) {
    const double target = lev * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t i = static_cast<std::size_t>(std::distance(cum.begin(), it));
    i = std::min(std::max<std::size_t>(i, 1), cum.size() - 1) - 1;
    double lo = edges[i], hi = edges[i + 1];
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double m = cum[i] + integrate([&](double x) { return field.current({tau, x}).j0; },
                                          edges[i], mid, panel_rule);
      (m < target ? lo : hi) = mid;
    }
    starts.push_back({tau, 0.5 * (lo + hi)});
  }
  return starts;
}

/// Largest pairwise ordering violation over a shared time grid; exactly 0.0
/// means the trajectories never cross (they keep their initial order).
inline double max_crossing_violation(const std::vector<Trajectory>& trajs,
                                     const std::vector<double>& grid) {
  double worst = 0.0;
  for (std::size_t a = 0; a + 1 < trajs.size(); ++a) {
    for (std::size_t b = a + 1; b < trajs.size(); ++b) {
      const double d0 = trajs[b].start.x1 - trajs[a].start.x1;
      for (double t : grid) {
        const double d = interp_x1(trajs[b], t) - interp_x1(trajs[a], t);
        if (d * d0 < 0.0) worst = std::max(worst, std::abs(d));
      }
    }
  }
  return worst;
}

/// Largest |dx1/dx0| over consecutive samples of a trajectory.
inline double max_sample_velocity(const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const double dt = traj.samples[i + 1].x0 - traj.samples[i].x0;
    if (dt == 0.0) continue;
    worst = std::max(worst, std::abs((traj.samples[i + 1].x1 - traj.samples[i].x1) / dt));
  }
  return worst;
}

/// Velocity field sampled on a uniform (x0, x1) grid with bicubic
/// (Catmull-Rom) interpolation; falls back to the exact field outside the
/// grid. Trades accuracy for speed; the spacing is recorded for output
/// metadata.
class GridVelocityField {
public:
  GridVelocityField(const PacketField& source, double t_lo, double t_hi, double x_lo,
                    double x_hi, double dt, double dx, unsigned n_threads = 1)
      : source_(source), t_lo_(t_lo), x_lo_(x_lo), dt_(dt), dx_(dx) {
    nt_ = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / dt)) + 1;
    nx_ = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / dx)) + 1;
    v_.resize(nt_ * nx_);
    j0_.resize(nt_ * nx_);
    parallel_for(nt_, n_threads, [&](std::size_t it) {
      for (std::size_t ix = 0; ix < nx_; ++ix) {
        const FlowSample f = source_.flow(t_lo_ + dt_ * it, x_lo_ + dx_ * ix);
        v_[it * nx_ + ix] = f.velocity;
        j0_[it * nx_ + ix] = f.j0;
      }
    });
  }

  double dt() const { return dt_; }
  double dx() const { return dx_; }

  FlowSample flow(double x0, double x1) const {
    const double ft = (x0 - t_lo_) / dt_;
    const double fx = (x1 - x_lo_) / dx_;
    if (ft < 1.0 || fx < 1.0 || ft > nt_ - 2.0 || fx > nx_ - 2.0) {
      return source_.flow(x0, x1);  // outside the safe stencil range
    }
    const auto it = static_cast<std::ptrdiff_t>(ft);
    const auto ix = static_cast<std::ptrdiff_t>(fx);
    const double ut = ft - it;
    const double ux = fx - ix;
    double rows_v[4], rows_j[4];
    for (int m = -1; m <= 2; ++m) {
      const std::size_t row = clamp_t(it + m) * nx_;
      rows_v[m + 1] = catmull(v_[row + clamp_x(ix - 1)], v_[row + clamp_x(ix)],
                              v_[row + clamp_x(ix + 1)], v_[row + clamp_x(ix + 2)], ux);
      rows_j[m + 1] = catmull(j0_[row + clamp_x(ix - 1)], j0_[row + clamp_x(ix)],
                              j0_[row + clamp_x(ix + 1)], j0_[row + clamp_x(ix + 2)], ux);
    }
    return {catmull(rows_v[0], rows_v[1], rows_v[2], rows_v[3], ut),
            catmull(rows_j[0], rows_j[1], rows_j[2], rows_j[3], ut)};
  }

private:
  static double catmull(double p0, double p1, double p2, double p3, double u) {
    return p1 + 0.5 * u * (p2 - p0 +
                           u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                u * (3.0 * (p1 - p2) + p3 - p0)));
  }
  std::size_t clamp_t(std::ptrdiff_t i) const {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, nt_ - 1));
  }
  std::size_t clamp_x(std::ptrdiff_t i) const {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, nx_ - 1));
  }

  const PacketField& source_;
  double t_lo_, x_lo_, dt_, dx_;
  std::size_t nt_{0}, nx_{0};
  std::vector<double> v_, j0_;
};

}  // namespace kleinflow
