#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "kleinflow/bohmian.hpp"

using namespace kleinflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct ConstantFlow {
  double v;
  FlowSample flow(double, double) const { return {v, 1.0}; }
};

// density fades to zero to the right of x1 = 5
struct FadingFlow {
  FlowSample flow(double, double x1) const {
    return {0.5, x1 < 5.0 ? 1.0 : std::exp(-(x1 - 5.0))};
  }
};

const PhysicalParams shallow{1.0, 2.25};
const StepMode ref = make_step_mode(0.5, shallow);

IntegratorConfig span(double t0, double t1) {
  IntegratorConfig cfg;
  cfg.t_start = t0;
  cfg.t_end = t1;
  return cfg;
}

}  // namespace

TEST_CASE("constant field integrates to a straight line") {
  const ConstantFlow field{0.75};
  const Trajectory traj = integrate_trajectory(field, {0.0, 2.0}, span(0.0, 40.0));
  REQUIRE(traj.status == TrajectoryStatus::completed);
  for (const auto& s : traj.samples) {
    REQUIRE_THAT(s.x1, WithinAbs(2.0 + 0.75 * s.x0, 1e-9));
  }
  CHECK_THAT(traj.samples.back().x0, WithinAbs(40.0, 1e-12));
}

TEST_CASE("density floor handling") {
  const FadingFlow field;
  IntegratorConfig cfg = span(0.0, 100.0);
  cfg.density_floor = 1e-6;
  const Trajectory traj = integrate_trajectory(field, {0.0, 0.0}, cfg);
  CHECK(traj.status == TrajectoryStatus::aborted_low_density);
  CHECK(traj.samples.back().x1 > 5.0);
  CHECK(traj.samples.back().x1 < 30.0);

  CHECK_THROWS_AS(integrate_trajectory(field, {0.0, 40.0}, cfg), InvalidStart);

  SECTION("batch converts InvalidStart into a per-trajectory status") {
    const auto batch = batch_trajectories(field, {{0.0, 0.0}, {0.0, 40.0}}, cfg);
    REQUIRE(batch.size() == 2);
    CHECK(batch[0].samples.size() > 2);
    CHECK(batch[1].status == TrajectoryStatus::aborted_low_density);
    CHECK(batch[1].samples.size() == 1);
  }

  SECTION("empty batch") {
    CHECK(batch_trajectories(field, {}, cfg).empty());
  }
}

TEST_CASE("plane-mode trajectories reproduce the closed form") {
  const StepModeFlow field{ref};
  IntegratorConfig cfg = span(0.0, 130.0);
  cfg.osc_k = ref.k;
  const Trajectory fwd = integrate_trajectory(field, {0.0, 0.0}, cfg);
  cfg = span(0.0, -1000.0);
  cfg.osc_k = ref.k;
  const Trajectory bwd = integrate_trajectory(field, {0.0, 0.0}, cfg);

  double worst = 0.0;
  double max_v = 0.0;
  for (const Trajectory* traj : {&fwd, &bwd}) {
    REQUIRE(traj->status == TrajectoryStatus::completed);
    for (const auto& s : traj->samples) {
      worst = std::max(worst, std::abs(closed_form_trajectory(ref, 0.0, s.x1) - s.x0));
    }
    max_v = std::max(max_v, max_sample_velocity(*traj));
  }
  CHECK(bwd.samples.back().x1 < -50.0);
  CHECK(fwd.samples.back().x1 > 50.0);
  CHECK(worst < 1e-6 * 1130.0);
  CHECK(max_v < 1.0);

  SECTION("x1 strictly increases along the flow") {
    for (std::size_t i = 1; i < fwd.samples.size(); ++i) {
      REQUIRE(fwd.samples[i].x1 > fwd.samples[i - 1].x1);
    }
  }

  SECTION("tau-shifted trajectories never cross") {
    IntegratorConfig c2 = span(0.0, 60.0);
    c2.osc_k = ref.k;
    const Trajectory a = integrate_trajectory(field, {0.0, 0.0}, c2);
    c2 = span(1.0, 60.0);
    c2.osc_k = ref.k;
    const Trajectory b = integrate_trajectory(field, {1.0, 0.0}, c2);
    // at equal times the later-started trajectory lags strictly behind
    for (double t = 1.0; t <= 60.0; t += 0.5) {
      REQUIRE(interp_x1(b, t) < interp_x1(a, t));
    }
  }
}

TEST_CASE("error estimate tracks the true tolerance response") {
  const StepModeFlow field{ref};
  IntegratorConfig lo = span(0.0, -400.0);
  lo.osc_k = ref.k;
  IntegratorConfig hi = lo;
  hi.rel_tol = lo.rel_tol / 2.0;
  const Trajectory a = integrate_trajectory(field, {0.0, 0.0}, lo);
  const Trajectory b = integrate_trajectory(field, {0.0, 0.0}, hi);
  const double shift = std::abs(a.samples.back().x1 - b.samples.back().x1);
  CHECK(shift < 10.0 * a.stats.error_estimate);
  CHECK(a.stats.max_error_estimate > 0.0);
  CHECK(a.stats.steps > 10);
}

TEST_CASE("near-step oscillation cap limits the step size") {
  const StepModeFlow field{ref};
  IntegratorConfig cfg = span(0.0, 30.0);
  cfg.osc_k = 0.5;
  const Trajectory traj = integrate_trajectory(field, {0.0, -1.0}, cfg);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    if (std::abs(traj.samples[i - 1].x1) < 2.0 * M_PI / cfg.osc_k) {
      REQUIRE(traj.samples[i].x0 - traj.samples[i - 1].x0 <= 0.1 / cfg.osc_k + 1e-12);
    }
  }
}

TEST_CASE("quantile starts") {
  const PhysicalParams deep{1.0, 4.0};
  const AmplitudeProfile fig2 = gaussian_amplitude(0.3, 0.1);
  PacketField field(PacketKind::free_u, fig2, deep);

  SECTION("median for n = 1") {
    const auto starts = pick_starts(field, 0.0, 1, 0.9);
    REQUIRE(starts.size() == 1);
    // symmetric profile at tau = 0: median at the origin
    CHECK_THAT(starts[0].x1, WithinAbs(0.0, 0.05));
    CHECK(starts[0].x0 == 0.0);
  }

  SECTION("n = 3 with coverage 0.9 lands on the {5, 50, 95}% quantiles") {
    const auto starts = pick_starts(field, 0.0, 3, 0.9);
    REQUIRE(starts.size() == 3);
    // verify by integrating the density up to each start
    const double nsq = normsq_kspace(fig2, deep);
    const auto& rule = *gauss_legendre_cached(24);
    const double expected[3] = {0.05, 0.5, 0.95};
    for (int i = 0; i < 3; ++i) {
      const double mass = integrate_panels(
          [&](double x) { return field.current({0.0, x}).j0; }, -250.0, starts[i].x1, 4.0,
          rule);
      REQUIRE_THAT(mass / nsq, WithinAbs(expected[i], 2e-3));
    }
    REQUIRE(starts[0].x1 < starts[1].x1);
    REQUIRE(starts[1].x1 < starts[2].x1);
  }

  SECTION("argument validation") {
    CHECK_THROWS_AS(pick_starts(field, 0.0, 0, 0.9), DomainError);
    CHECK_THROWS_AS(pick_starts(field, 0.0, 4, 1.5), DomainError);
  }
}
