#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kleinflow/amplitude.hpp"
#include "kleinflow/dispersion.hpp"
#include "kleinflow/errors.hpp"
#include "kleinflow/free_modes.hpp"
#include "kleinflow/rng.hpp"
#include "kleinflow/spinor.hpp"
#include "kleinflow/step_modes.hpp"
#include "kleinflow/wave_packets.hpp"

namespace kleinflow {

struct LocalizationReport {
  double tau{0.0};
  double x_lo{0.0};
  double x_hi{0.0};
  double mass_fraction{0.0};
  double total_norm_sq{0.0};
  int k_order{0};
  int spatial_order{0};
};

/// Probability mass of the packet density in [x_lo, x_hi] at time tau,
/// normalized by the (k-space) total norm. For U^in[a] the total norm equals
/// that of U[a] by conservation.
inline double probability_in_interval(PacketKind kind, const AmplitudeProfile& a,
                                      const PhysicalParams& p, double tau, double x_lo,
                                      double x_hi, const QuadConfig& qc = {},
                                      const SpatialQuad& sq = {}) {
  const double nsq = normsq_kspace(a, p);
  if (!(nsq > 0.0)) throw ZeroNorm("packet has zero norm");
  if (!(x_hi > x_lo)) return 0.0;
  PacketField field(kind, a, p, qc);
  return mass_in_interval(field, tau, x_lo, x_hi, sq) / nsq;
}

/// Mass fractions inside the spreading interval tau*[v1, v2] for a list of
/// times. Requires v1 < v_g(k1) and v_g(k2) < v2 (the group-velocity span of
/// the support must be strictly bracketed).
inline std::vector<LocalizationReport> localization_sweep(
    PacketKind kind, const AmplitudeProfile& a, const PhysicalParams& p,
    const std::vector<double>& taus, double v1, double v2, const QuadConfig& qc = {},
    const SpatialQuad& sq = {}) {
  if (!(v1 < group_velocity(a.k1, p)) || !(group_velocity(a.k2, p) < v2)) {
    throw DomainError(DomainFault::bad_argument,
                      "localization bounds must bracket the group-velocity span");
  }
  const double nsq = normsq_kspace(a, p);
  if (!(nsq > 0.0)) throw ZeroNorm("packet has zero norm");
  PacketField field(kind, a, p, qc);
  std::vector<LocalizationReport> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const double lo = std::min(tau * v1, tau * v2);
    const double hi = std::max(tau * v1, tau * v2);
    LocalizationReport rep;
    rep.tau = tau;
    rep.x_lo = lo;
    rep.x_hi = hi;
    rep.total_norm_sq = nsq;
    rep.k_order = qc.base_order;
    rep.spatial_order = sq.order;
    rep.mass_fraction = hi > lo ? mass_in_interval(field, tau, lo, hi, sq) / nsq : 0.0;
    out.push_back(rep);
  }
  return out;
}

struct RTBudget {
  double R{0.0};
  double T{0.0};
};

/// Reflection/transmission probabilities of the packet:
///   R = ||U[a_r]||^2 / ||U[a]||^2 = int dmu |a|^2 r(k)^2 / int dmu |a|^2,
///   T = ||V[a_t]||^2 / ||U[a]||^2 = int dmu |a|^2 q t(k)^2 / k / int dmu |a|^2.
/// Mode-wise r^2 + q t^2 / k = 1 forces R + T = 1.
inline RTBudget rt_budget(const AmplitudeProfile& a, const PhysicalParams& p,
                          int order = 512) {
  require_step_window(a, p);
  const auto& rule = *gauss_legendre_cached(order);
  auto dmu = [&](double k) { return std::norm(a.eval(k)) / (2.0 * omega_bar(k, p)); };
  const double nsq = integrate(dmu, a.k1, a.k2, rule);
  if (!(nsq > 0.0)) throw ZeroNorm("rt_budget: packet has zero norm");
  const double R = integrate(
      [&](double k) {
        const StepMode m = make_step_mode(k, p);
        return dmu(k) * m.r * m.r;
      },
      a.k1, a.k2, rule);
  const double T = integrate(
      [&](double k) {
        const StepMode m = make_step_mode(k, p);
        return dmu(k) * m.q * m.t * m.t / k;
      },
      a.k1, a.k2, rule);
  return {R / nsq, T / nsq};
}

struct IdentityResult {
  std::string name;
  double max_residual{0.0};
  double tolerance{1e-10};
  bool pass{false};
};

struct IdentitySuiteConfig {
  double kappa{1.0};
  double V{0.0};  // 0: sample V in [2.2, 8]*kappa; otherwise fixed (must be > 2*kappa)
  int samples{100};
  std::uint64_t seed{0x6b6c65696eull};
  double perturb_r{0.0};  // fault injection for the continuity identities
};

/// Closed-identity checks across random parameters: the spinor product
/// relations, the step-matching continuity equations, coefficient bounds and
/// the involution/energy-partition/fixed-point properties of the matching map.
inline std::vector<IdentityResult> run_identity_suite(const IdentitySuiteConfig& cfg = {}) {
  PhysicalParams base{cfg.kappa, cfg.V};
  if (cfg.V != 0.0) klein_k_max(base);  // validate before sampling
  SplitMix64 rng(cfg.seed);

  auto rel = [](double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  };

  std::vector<IdentityResult> results;
  auto add = [&](const std::string& name, double residual, double tol = 1e-10) {
    results.push_back({name, residual, tol, residual < tol});
  };

  // Remark-level spinor relations on random k.
  double r_uu = 0, r_vv = 0, r_uum = 0, r_vvm = 0, r_lu = 0, r_lv = 0, r_lum = 0, r_lvm = 0;
  double r_gamma = 0, r_timelike = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const double k = rng.uniform(-3.0 * cfg.kappa, 3.0 * cfg.kappa);
    const PhysicalParams p{cfg.kappa, 0.0};
    const Spinor uk = spinor_u(k, p), umk = spinor_u(-k, p);
    const Spinor vk = spinor_v(k, p), vmk = spinor_v(-k, p);
    const double om2 = 2.0 * omega_bar(k, p);
    r_uu = std::max(r_uu, rel(scalar_inner(uk, uk).real(), om2));
    r_vv = std::max(r_vv, rel(scalar_inner(vk, vk).real(), om2));
    r_uum = std::max(r_uum, rel(scalar_inner(uk, umk).real(), 2.0 * cfg.kappa));
    r_vvm = std::max(r_vvm, rel(scalar_inner(vk, vmk).real(), 2.0 * cfg.kappa));
    r_lu = std::max(r_lu, rel(lorentz_inner(uk, gamma1(uk)).real(), 2.0 * k));
    r_lv = std::max(r_lv, rel(lorentz_inner(vk, gamma1(vk)).real(), 2.0 * k));
    r_lum = std::max(r_lum, std::abs(lorentz_inner(uk, gamma1(umk))));
    r_lvm = std::max(r_lvm, std::abs(lorentz_inner(vk, gamma1(vmk))));

    const Spinor s{complexd(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                   complexd(rng.uniform(-1, 1), rng.uniform(-1, 1))};
    const Spinor w{complexd(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                   complexd(rng.uniform(-1, 1), rng.uniform(-1, 1))};
    r_gamma = std::max(r_gamma, std::abs(lorentz_inner(s, w) - scalar_inner(s, gamma0(w))));
    const CurrentVector j = current_of(s);
    r_timelike = std::max(r_timelike, rel(j.j0 * j.j0 - j.j1 * j.j1,
                                          4.0 * std::norm(s.c1 * s.c2)));
  }
  add("S(u(k),u(k)) = 2 omega_bar(k)", r_uu);
  add("S(v(k),v(k)) = 2 omega_bar(k)", r_vv);
  add("S(u(k),u(-k)) = 2 kappa", r_uum);
  add("S(v(k),v(-k)) = 2 kappa", r_vvm);
  add("L(u(k),gamma1 u(k)) = 2 k", r_lu);
  add("L(v(k),gamma1 v(k)) = 2 k", r_lv);
  add("L(u(k),gamma1 u(-k)) = 0", r_lum);
  add("L(v(k),gamma1 v(-k)) = 0", r_lvm);
  add("L(v,w) = S(v,gamma0 w)", r_gamma, 1e-14);
  add("j0^2 - j1^2 = 4 |c1 c2|^2", r_timelike, 1e-12);

  // Step-mode identities on random Klein-regime parameters.
  double r_j0 = 0, r_j1 = 0, r_bounds = 0, r_tsign = 0, r_invol = 0, r_energy = 0;
  double r_fixed = 0, r_decreasing = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    PhysicalParams p = base;
    if (cfg.V == 0.0) p.V = rng.uniform(2.2 * cfg.kappa, 8.0 * cfg.kappa);
    const double k_max = klein_k_max(p);
    const double k = rng.uniform(0.02, 0.98) * k_max;
    const StepMode m = make_step_mode(k, p);
    const double r = m.r + cfg.perturb_r;
    const double omk = omega_bar(k, p), omq = omega_bar(m.q, p);
    r_j0 = std::max(r_j0, rel(omk * (1.0 + r * r) + 2.0 * p.kappa * r, omq * m.t * m.t));
    r_j1 = std::max(r_j1, rel(k * (1.0 - r * r), m.q * m.t * m.t));
    if (!(m.r > -1.0 && m.r < 0.0)) r_bounds = std::max(r_bounds, 1.0);
    if (!(m.t < 0.0)) r_tsign = std::max(r_tsign, 1.0);
    r_invol = std::max(r_invol, std::abs(s_map(m.q, p) - k));
    r_energy = std::max(r_energy, rel(omk + omq, p.V));
    const double k0 = fixed_point_k0(p);
    r_fixed = std::max(r_fixed, rel(s_map(k0, p), k0));
    const double k_b = rng.uniform(0.02, 0.98) * k_max;
    if (k_b != k && (s_map(std::min(k, k_b), p) <= s_map(std::max(k, k_b), p))) {
      r_decreasing = std::max(r_decreasing, 1.0);
    }
  }
  add("j0 continuity: omega(k)(1+r^2) + 2 kappa r = omega(q) t^2", r_j0);
  add("j1 continuity: k (1-r^2) = q t^2", r_j1);
  add("bounds: -1 < r < 0", r_bounds);
  add("sign: t < 0", r_tsign);
  add("involution: s(s(k)) = k", r_invol);
  add("energy partition: omega(k) + omega(q) = V", r_energy);
  add("fixed point: s(k0) = k0", r_fixed);
  add("monotone: s strictly decreasing", r_decreasing);
  return results;
}

}  // namespace kleinflow
