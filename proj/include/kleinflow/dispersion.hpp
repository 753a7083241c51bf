#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "kleinflow/errors.hpp"

namespace kleinflow {

/// Physical constants of a scenario: inverse Compton length kappa and step height V.
/// All wave numbers, lengths and times are expressed in units of kappa.
struct PhysicalParams {
  double kappa{1.0};
  double V{0.0};
};

inline void require_positive_kappa(const PhysicalParams& p) {
  if (!(p.kappa > 0.0)) {
    throw DomainError(DomainFault::bad_argument, "kappa must be > 0");
  }
}

/// Relativistic dispersion: omega_bar(k) = sqrt(kappa^2 + k^2).
inline double omega_bar(double k, const PhysicalParams& p) {
  return std::hypot(p.kappa, k);
}

/// Spinor weight Omega(k) = sqrt(omega_bar(k) + k), positive for all k.
inline double omega_cap(double k, const PhysicalParams& p) {
  return std::sqrt(omega_bar(k, p) + k);
}

/// Group velocity k / omega_bar(k), strictly increasing, valued in (-1, 1).
inline double group_velocity(double k, const PhysicalParams& p) {
  return k / omega_bar(k, p);
}

/// Upper end of the admissible incoming wave numbers, sqrt(V^2 - 2*kappa*V).
/// Beyond it the transmitted branch leaves the Klein regime.
inline double klein_k_max(const PhysicalParams& p) {
  require_positive_kappa(p);
  if (!(p.V > 2.0 * p.kappa)) {
    throw DomainError(DomainFault::no_klein_regime,
                      "Klein regime requires V > 2*kappa (V = " + std::to_string(p.V) +
                          ", kappa = " + std::to_string(p.kappa) + ")");
  }
  return std::sqrt(p.V * (p.V - 2.0 * p.kappa));
}

/// Matching map s: k -> q with omega_bar(k) + omega_bar(q) = V.
/// Monotonically decreasing involution of (0, klein_k_max).
inline double s_map(double k, const PhysicalParams& p) {
  const double k_max = klein_k_max(p);
  if (!(k > 0.0) || !(k < k_max)) {
    throw DomainError(DomainFault::outside_klein_window,
                      "wave number outside (0, sqrt(V^2-2*kappa*V)): k = " + std::to_string(k));
  }
  const double rad = p.V * p.V - 2.0 * p.V * omega_bar(k, p) + k * k;
  return std::sqrt(std::max(rad, 0.0));
}

/// Fixed point k0 = (V/2) sqrt(1 - (2*kappa/V)^2) of the matching map.
inline double fixed_point_k0(const PhysicalParams& p) {
  klein_k_max(p);  // validates the regime
  const double ratio = 2.0 * p.kappa / p.V;
  return 0.5 * p.V * std::sqrt(1.0 - ratio * ratio);
}

}  // namespace kleinflow
