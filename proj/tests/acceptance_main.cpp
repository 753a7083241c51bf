// Acceptance suite: end-to-end checks of the analytic identities, the
// matching coefficients, trajectory closed forms, packet decomposition,
// conservation laws, the two figure-scale ensembles, localization, and the
// no-crossing/subluminality guarantees. Prints one pass/fail line per
// criterion; the exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kleinflow/kleinflow.hpp"

using namespace kleinflow;

namespace {

int g_failures = 0;

class Criterion {
public:
  explicit Criterion(std::string name) : name_(std::move(name)), start_(clock::now()) {}

  void check(bool ok, const std::string& detail) {
    if (!ok) failures_.push_back(detail);
  }
  void check_le(double value, double limit, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s = %.3e (limit %.3e)", what.c_str(), value, limit);
    check(value <= limit, buf);
  }

  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(clock::now() - start_).count();
    if (failures_.empty()) {
      std::printf("[PASS] %s (%.1f s)\n", name_.c_str(), secs);
    } else {
      ++g_failures;
      std::printf("[FAIL] %s (%.1f s)\n", name_.c_str(), secs);
      for (const auto& f : failures_) std::printf("       %s\n", f.c_str());
    }
    std::fflush(stdout);
  }

private:
  using clock = std::chrono::steady_clock;
  std::string name_;
  clock::time_point start_;
  std::vector<std::string> failures_;
};

const PhysicalParams deep{1.0, 4.0};
const AmplitudeProfile fig2_prof = gaussian_amplitude(0.3, 0.1);
const AmplitudeProfile fig3_prof = gaussian_amplitude(2.7, 0.05);

struct EnsembleRun {
  std::vector<SpacetimePoint> starts;
  std::vector<Trajectory> trajs;
  std::vector<double> early_v;       // per trajectory, first 30 time units
  std::vector<double> late_v_trans;  // transmitted only, last 40 time units
  int transmitted{0};
  double t_start, t_end;
};

EnsembleRun run_ensemble(const AmplitudeProfile& prof, double t_start, double t_end) {
  QuadConfig qc{256, 1e-10, false, 16384};
  PacketField field(PacketKind::step_in, prof, deep, qc);
  EnsembleRun run;
  run.t_start = t_start;
  run.t_end = t_end;
  run.starts = pick_starts(field, t_start, 16, 0.9);
  double peak = 0.0;
  for (const auto& s : run.starts) peak = std::max(peak, field.current(s).j0);
  IntegratorConfig cfg;
  cfg.t_start = t_start;
  cfg.t_end = t_end;
  cfg.density_floor = 1e-10 * peak;
  cfg.osc_k = prof.k2;
  run.trajs = batch_trajectories(field, run.starts, cfg,
                                 std::min(default_thread_count(), 8u));
  for (const auto& tr : run.trajs) {
    run.early_v.push_back((interp_x1(tr, t_start + 30.0) - tr.samples.front().x1) / 30.0);
    if (tr.samples.back().x1 > 0.0) {
      ++run.transmitted;
      run.late_v_trans.push_back((interp_x1(tr, t_end) - interp_x1(tr, t_end - 40.0)) / 40.0);
    }
  }
  return run;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

int main() {
  // ---- criterion 1: closed identities ------------------------------------
  {
    Criterion c("C1 identity suite (inner products, continuity, bounds, matching map)");
    IdentitySuiteConfig cfg;
    cfg.samples = 100;
    const auto results = run_identity_suite(cfg);
    for (const auto& r : results) {
      c.check_le(r.max_residual, 1e-10, r.name);
    }
  }

  // ---- criterion 2: matching oracle --------------------------------------
  {
    Criterion c("C2 closed-form r,t vs numerically solved matching system");
    SplitMix64 rng(0xacceff);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const PhysicalParams p{1.0, rng.uniform(2.2, 8.0)};
      const double k = rng.uniform(0.02, 0.98) * klein_k_max(p);
      const StepMode m = make_step_mode(k, p);
      const auto sol = oracle::solve_matching(k, p);
      worst = std::max(worst, std::abs(m.r - sol.beta) / std::max(1.0, std::abs(sol.beta)));
      worst = std::max(worst, std::abs(m.t - sol.gamma) / std::max(1.0, std::abs(sol.gamma)));
    }
    c.check_le(worst, 1e-10, "max |closed-form - solved| over 50 samples");
  }

  // ---- criterion 3: plane-mode trajectory vs closed form ------------------
  {
    Criterion c("C3 ODE trajectory vs closed form (V=2.25, k=0.5, figure-1 window)");
    const StepMode mode = make_step_mode(0.5, PhysicalParams{1.0, 2.25});
    const StepModeFlow field{mode};
    IntegratorConfig cfg;
    cfg.osc_k = mode.k;
    double worst = 0.0;
    for (double t_end : {200.0, -600.0}) {
      cfg.t_start = 0.0;
      cfg.t_end = t_end;
      const Trajectory traj = integrate_trajectory(field, {0.0, 0.0}, cfg);
      c.check(traj.status == TrajectoryStatus::completed, "integration did not complete");
      for (const auto& s : traj.samples) {
        worst = std::max(worst, std::abs(closed_form_trajectory(mode, 0.0, s.x1) - s.x0));
      }
    }
    c.check_le(worst, 1e-5 * 800.0, "max |x0_ode - x0_closed|");
  }

  // ---- criterion 4: packet decomposition ----------------------------------
  {
    Criterion c("C4 pointwise packet decomposition at 200 points in the figure-2 window");
    PacketField in(PacketKind::step_in, fig2_prof, deep);
    PacketField ua(PacketKind::free_u, fig2_prof, deep);
    PacketField ur(PacketKind::free_u, reflected_amplitude(fig2_prof, deep), deep);
    PacketField vt(PacketKind::free_v, transmitted_amplitude(fig2_prof, deep), deep);
    SplitMix64 rng(0xdeed);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const SpacetimePoint pt{rng.uniform(-180, 200), rng.uniform(-100, 300)};
      const Spinor lhs = in.value(pt);
      const Spinor rhs = pt.x1 < 0.0
                             ? ua.value(pt) + ur.value(pt)
                             : std::polar(1.0, -deep.V * pt.x0) * vt.value(pt);
      worst = std::max({worst, std::abs(lhs.c1 - rhs.c1), std::abs(lhs.c2 - rhs.c2)});
    }
    c.check_le(worst, 1e-10, "max pointwise deviation");
  }

  // ---- criterion 5: conservation ------------------------------------------
  {
    Criterion c("C5 norm conservation and divergence-free current");
    const SpatialQuad sq{12.0, 20, 1e-7};
    const QuadConfig qc{256, 1e-10, false, 16384};
    std::vector<double> norms;
    for (double tau : {-150.0, 0.0, 150.0}) {
      norms.push_back(
          norm_at_time(PacketKind::step_in, fig2_prof, deep, tau, -1500.0, 1500.0, qc, sq));
    }
    double drift = 0.0;
    for (double a : norms) {
      for (double b : norms) drift = std::max(drift, std::abs(a - b) / norms[0]);
    }
    c.check_le(drift, 1e-6, "relative norm drift across tau in {-150, 0, 150}");

    PacketField field(PacketKind::step_in, fig2_prof, deep, qc);
    auto jfield = [&](const SpacetimePoint& pt) { return field.current(pt); };
    SplitMix64 rng(0x5eed);
    double worst_div = 0.0;
    for (int i = 0; i < 500; ++i) {
      double x1 = rng.uniform(-60, 60);
      if (std::abs(x1) < 2e-3) x1 += 0.5;  // current is not differentiable at 0 in general
      worst_div = std::max(worst_div,
                           oracle::divergence(jfield, {rng.uniform(-60, 60), x1}));
    }
    c.check_le(worst_div, 1e-5, "max |div j| at 500 probe points");
  }

  // ---- criteria 6/7/9: figure-scale ensembles ------------------------------
  EnsembleRun fig2_run = run_ensemble(fig2_prof, -150.0, 200.0);
  {
    Criterion c("C6 figure-2 ensemble (K=0.3, Delta=0.1, V=4)");
    bool all_left = true;
    for (const auto& s : fig2_run.starts) all_left = all_left && s.x1 < 0.0;
    c.check(all_left, "not all 16 starts lie in x1 < 0");

    const double v_ref = group_velocity(s_map(0.3, deep), deep);  // 0.9410...
    c.check_le(std::abs(mean(fig2_run.late_v_trans) - v_ref), 0.02,
               "|mean transmitted late velocity - " + std::to_string(v_ref) + "|");

    const RTBudget budget = rt_budget(fig2_prof, deep);
    c.check_le(std::abs(fig2_run.transmitted / 16.0 - budget.T), 2.0 / 16.0,
               "|transmitted fraction - T|");

    // strict acceleration: every transmitted trajectory ends faster than any
    // incoming velocity in the ensemble
    double max_early = -1.0, min_late = 2.0;
    for (double v : fig2_run.early_v) max_early = std::max(max_early, v);
    for (double v : fig2_run.late_v_trans) min_late = std::min(min_late, v);
    c.check(fig2_run.transmitted > 0 && min_late > max_early,
            "transmitted packet is not strictly faster than the incoming one");
  }

  EnsembleRun fig3_run = run_ensemble(fig3_prof, -100.0, 160.0);
  {
    Criterion c("C7 figure-3 ensemble (K=2.7, Delta=0.05, V=4)");
    const double v_ref = group_velocity(s_map(2.7, deep), deep);  // 0.4515...
    c.check_le(std::abs(mean(fig3_run.late_v_trans) - v_ref), 0.02,
               "|mean transmitted late velocity - " + std::to_string(v_ref) + "|");
    double min_early = 2.0, max_late = -1.0;
    for (double v : fig3_run.early_v) min_early = std::min(min_early, v);
    for (double v : fig3_run.late_v_trans) max_late = std::max(max_late, v);
    c.check(fig3_run.transmitted > 0 && max_late < min_early,
            "transmitted packet is not strictly slower than the incoming one");
    c.check(std::abs(mean(fig3_run.early_v) - 0.9378) < 0.005,
            "incoming velocity is not ~0.9378 (got " +
                std::to_string(mean(fig3_run.early_v)) + ")");
  }

  // ---- criterion 8: localization -------------------------------------------
  {
    Criterion c("C8 finite-time localization of free and reflected packets");
    const PhysicalParams free_p{1.0, 0.0};
    const auto reports = localization_sweep(PacketKind::free_u, fig2_prof, free_p,
                                            {-300.0, 300.0}, 0.09, 0.46);
    for (const auto& rep : reports) {
      c.check(rep.mass_fraction >= 0.99,
              "mass fraction " + std::to_string(rep.mass_fraction) + " at tau = " +
                  std::to_string(rep.tau) + " below 0.99");
    }
    // reflected packet: mass in x1 < 0 at tau = +300, relative to ||U[a]||^2
    const AmplitudeProfile ar = reflected_amplitude(fig2_prof, deep);
    const double p_left =
        probability_in_interval(PacketKind::free_u, ar, free_p, 300.0, -240.0, 0.0);
    const double r_hat = normsq_kspace(ar, free_p) / normsq_kspace(fig2_prof, free_p);
    const RTBudget budget = rt_budget(fig2_prof, deep);
    c.check(p_left * r_hat >= 0.99 * budget.R,
            "reflected mass in x1<0 = " + std::to_string(p_left * r_hat) + " < 0.99 R = " +
                std::to_string(0.99 * budget.R));
  }

  // ---- criterion 9: no crossing, subluminal --------------------------------
  {
    Criterion c("C9 no trajectory crossings and |velocity| < 1 in both ensembles");
    for (const EnsembleRun* run : {&fig2_run, &fig3_run}) {
      std::vector<double> grid;
      for (double t = run->t_start; t <= run->t_end; t += 1.0) grid.push_back(t);
      c.check_le(max_crossing_violation(run->trajs, grid), 0.0, "crossing violation");
      double vmax = 0.0;
      for (const auto& tr : run->trajs) vmax = std::max(vmax, max_sample_velocity(tr));
      c.check(vmax < 1.0, "max |velocity| = " + std::to_string(vmax) + " >= 1");
    }
  }

  std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
