#pragma once

#include <cmath>
#include <string>

#include "kleinflow/dispersion.hpp"
#include "kleinflow/free_modes.hpp"
#include "kleinflow/spinor.hpp"

namespace kleinflow {

/// Right-incoming single-frequency solution of the step problem:
///   U_k + r U_{-k}            on x1 < 0,
///   exp(-i V x0) t V_q        on x1 >= 0,
/// with q the positive solution of omega_bar(k) + omega_bar(q) = V.
/// Coefficients are derived once at construction.
struct StepMode {
  PhysicalParams params{};
  double k{0.0};
  double q{0.0};
  double r{0.0};
  double t{0.0};
};

/// Builds a StepMode, validating the Klein regime: V > 2*kappa and
/// omega_bar(k) < V - kappa (equivalently 0 < k < klein_k_max).
inline StepMode make_step_mode(double k, const PhysicalParams& p) {
  StepMode m;
  m.params = p;
  m.k = k;
  m.q = s_map(k, p);  // throws DomainError outside the Klein window
  const double dk = k - m.q;
  m.r = -2.0 * p.kappa * p.V / (p.V * p.V - dk * dk);
  m.t = -2.0 * (k / p.kappa) * omega_cap(k, p) * omega_cap(-m.q, p) / (p.V + k - m.q);
  return m;
}

/// Left-branch formula U_k + r U_{-k}; valid on the closure x1 <= 0.
inline Spinor eval_step_mode_minus(const StepMode& m, const SpacetimePoint& pt) {
  const FreeMode fwd{m.k, FrequencySign::positive, m.params};
  const FreeMode bwd{-m.k, FrequencySign::positive, m.params};
  return eval_free_mode(fwd, pt) + m.r * eval_free_mode(bwd, pt);
}

/// Right-branch formula exp(-i V x0) t V_q; valid on the closure x1 >= 0.
inline Spinor eval_step_mode_plus(const StepMode& m, const SpacetimePoint& pt) {
  const FreeMode trans{m.q, FrequencySign::negative, m.params};
  return std::polar(1.0, -m.params.V * pt.x0) * (m.t * eval_free_mode(trans, pt));
}

/// Piecewise evaluation; the two branches agree on x1 = 0 by construction.
inline Spinor eval_step_mode(const StepMode& m, const SpacetimePoint& pt) {
  return pt.x1 < 0.0 ? eval_step_mode_minus(m, pt) : eval_step_mode_plus(m, pt);
}

/// Closed-form current:
///   pi j = t^2 [omega_bar(q), q] + 2 kappa r Theta(-x1) [cos(2 k x1) - 1] d0.
/// The interference of exp(i k x1) with r exp(-i k x1) beats at 2k; the
/// time component is x0-independent and j1 is constant everywhere.
inline CurrentVector current_step_mode(const StepMode& m, const SpacetimePoint& pt) {
  const double t2 = m.t * m.t;
  const double omq = omega_bar(m.q, m.params);
  double j0 = t2 * omq / M_PI;
  const double j1 = t2 * m.q / M_PI;
  if (pt.x1 < 0.0) {
    j0 += 2.0 * m.params.kappa * m.r * (std::cos(2.0 * m.k * pt.x1) - 1.0) / M_PI;
  }
  return {j0, j1};
}

/// Velocity j1/j0 of the step-mode current; constant q/omega_bar(q) on x1 >= 0,
/// oscillating within [q/(omega_bar(q) + 4 kappa |r|/t^2), q/omega_bar(q)] on x1 < 0.
inline double velocity_step_mode(const StepMode& m, const SpacetimePoint& pt) {
  const CurrentVector j = current_step_mode(m, pt);
  return j.j1 / j.j0;
}

struct VelocityBounds {
  double v_min{0.0};
  double v_max{0.0};
};

inline VelocityBounds velocity_bounds_step_mode(const StepMode& m) {
  const double omq = omega_bar(m.q, m.params);
  const double t2 = m.t * m.t;
  return {m.q / (omq + 4.0 * m.params.kappa * std::abs(m.r) / t2), m.q / omq};
}

/// Bohmian trajectory of the step mode through (tau, 0): returns x0 at
/// spatial position x1,
///   x0 - tau = (omega_bar(q)/q) x1
///            - (2 kappa r/(q t^2)) Theta(-x1) [x1 - sin(2 k x1)/(2 k)],
/// obtained by integrating dx0/dx1 = j0/j1 of current_step_mode.
inline double closed_form_trajectory(const StepMode& m, double tau, double x1) {
  const double omq = omega_bar(m.q, m.params);
  double x0 = tau + (omq / m.q) * x1;
  if (x1 < 0.0) {
    const double c = 2.0 * m.params.kappa * m.r / (m.q * m.t * m.t);
    x0 -= c * (x1 - std::sin(2.0 * m.k * x1) / (2.0 * m.k));
  }
  return x0;
}

}  // namespace kleinflow
