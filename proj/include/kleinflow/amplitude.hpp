#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "kleinflow/dispersion.hpp"
#include "kleinflow/errors.hpp"
#include "kleinflow/spinor.hpp"
#include "kleinflow/step_modes.hpp"

namespace kleinflow {

/// Fourier-space description of a packet: a continuous amplitude on the
/// compact support [k1, k2], integrated against dmu(k) = dk / (2 omega_bar(k)).
struct AmplitudeProfile {
  double k1{0.0};
  double k2{0.0};
  std::function<complexd(double)> eval;
  std::string label;
};

/// Validates the Klein window for step packets: 0 < k1 and omega_bar(k2) < V - kappa.
inline void require_step_window(const AmplitudeProfile& a, const PhysicalParams& p) {
  klein_k_max(p);
  if (!(a.k1 > 0.0)) {
    throw DomainError(DomainFault::outside_klein_window,
                      "step packet requires k1 > 0 (k1 = " + std::to_string(a.k1) + ")");
  }
  if (!(omega_bar(a.k2, p) < p.V - p.kappa)) {
    throw DomainError(DomainFault::outside_klein_window,
                      "step packet requires omega_bar(k2) < V - kappa (k2 = " +
                          std::to_string(a.k2) + ")");
  }
}

/// Gaussian amplitude a(k) = exp(-(k-K)^2 / Delta^2), hard-truncated to
/// the support [K - 2 Delta, K + 2 Delta].
inline AmplitudeProfile gaussian_amplitude(double K, double Delta) {
  if (!(Delta > 0.0)) throw DomainError(DomainFault::bad_argument, "Delta must be > 0");
  AmplitudeProfile a;
  a.k1 = K - 2.0 * Delta;
  a.k2 = K + 2.0 * Delta;
  a.eval = [K, Delta](double k) {
    const double d = (k - K) / Delta;
    return complexd(std::exp(-d * d), 0.0);
  };
  a.label = "gauss(K=" + std::to_string(K) + ",Delta=" + std::to_string(Delta) + ")";
  return a;
}

/// Reflected amplitude a_r(k) = r(-k) a(-k) on [-k2, -k1]; left-moving.
inline AmplitudeProfile reflected_amplitude(const AmplitudeProfile& a,
                                            const PhysicalParams& p) {
  require_step_window(a, p);
  AmplitudeProfile out;
  out.k1 = -a.k2;
  out.k2 = -a.k1;
  out.eval = [eval = a.eval, p](double k) {
    return make_step_mode(-k, p).r * eval(-k);
  };
  out.label = a.label + ".reflected";
  return out;
}

/// Transmitted amplitude a_t(q) = (q/k) t(k) a(k) with k = s(q), supported on
/// [s(k2), s(k1)] (the matching map reverses orientation).
inline AmplitudeProfile transmitted_amplitude(const AmplitudeProfile& a,
                                              const PhysicalParams& p) {
  require_step_window(a, p);
  AmplitudeProfile out;
  out.k1 = s_map(a.k2, p);
  out.k2 = s_map(a.k1, p);
  out.eval = [eval = a.eval, p](double q) {
    const double k = s_map(q, p);
    return (q / k) * make_step_mode(k, p).t * eval(k);
  };
  out.label = a.label + ".transmitted";
  return out;
}

}  // namespace kleinflow
