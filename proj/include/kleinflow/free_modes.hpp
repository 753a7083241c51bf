#pragma once

#include <cmath>

#include "kleinflow/dispersion.hpp"
#include "kleinflow/spinor.hpp"

namespace kleinflow {

inline constexpr double inv_sqrt_2pi = 0.39894228040143268;

enum class FrequencySign { positive, negative };

/// Plane-wave solution of the free Dirac equation: U_k (positive frequency)
/// or V_k (negative frequency), normalized with the 1/sqrt(2 pi) prefactor.
struct FreeMode {
  double k{0.0};
  FrequencySign frequency_sign{FrequencySign::positive};
  PhysicalParams params{};
};

/// u(k) = (Omega(k), Omega(-k)); both components real positive.
inline Spinor spinor_u(double k, const PhysicalParams& p) {
  return {complexd(omega_cap(k, p), 0.0), complexd(omega_cap(-k, p), 0.0)};
}

/// v(k) = (-Omega(k), Omega(-k)).
inline Spinor spinor_v(double k, const PhysicalParams& p) {
  return {complexd(-omega_cap(k, p), 0.0), complexd(omega_cap(-k, p), 0.0)};
}

/// sqrt(2 pi) U_k = exp(-i(omega_bar(k) x0 - k x1)) u(k), and V_k with the
/// conjugate phase on v(k).
inline Spinor eval_free_mode(const FreeMode& m, const SpacetimePoint& pt) {
  const double om = omega_bar(m.k, m.params);
  const double phase = om * pt.x0 - m.k * pt.x1;
  if (m.frequency_sign == FrequencySign::positive) {
    return inv_sqrt_2pi * (std::polar(1.0, -phase) * spinor_u(m.k, m.params));
  }
  return inv_sqrt_2pi * (std::polar(1.0, phase) * spinor_v(m.k, m.params));
}

/// The current of U_k and V_k is constant: (omega_bar(k), k) / pi.
inline CurrentVector free_mode_current(const FreeMode& m) {
  return {omega_bar(m.k, m.params) / M_PI, m.k / M_PI};
}

}  // namespace kleinflow
