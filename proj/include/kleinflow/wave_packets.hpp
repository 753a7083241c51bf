#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kleinflow/amplitude.hpp"
#include "kleinflow/dispersion.hpp"
#include "kleinflow/errors.hpp"
#include "kleinflow/quadrature.hpp"
#include "kleinflow/spinor.hpp"
#include "kleinflow/step_modes.hpp"

namespace kleinflow {

enum class PacketKind { free_u, free_v, step_in };

/// k-quadrature policy for packet evaluation. The base order is raised
/// automatically with |x0| + |x1| (the integrand oscillates faster far from
/// the origin); when `check` is set every evaluation is validated by doubling
/// the order and comparing.
struct QuadConfig {
  int base_order{256};
  double tol{1e-10};
  bool check{false};
  int max_order{16384};
};

/// Velocity/density sample of a current field, as consumed by the integrator.
struct FlowSample {
  double velocity{0.0};
  double j0{0.0};
};

namespace detail {

/// Per-node constants of the packet integrand for one (profile, order) pair.
struct PacketTable {
  std::vector<double> k, om;          // node wave number, omega_bar(k)
  std::vector<complexd> coeff;        // w * a(k) / (2 omega_bar(k) sqrt(2 pi))
  std::vector<double> s1, s2;         // u(k) or v(k) components (free kinds)
  // step_in extras
  std::vector<double> r, t, q, om_q;  // matching data per node
  std::vector<double> u1, u2, v1, v2; // u(k), v(q) components
};

inline std::shared_ptr<const PacketTable> build_table(PacketKind kind,
                                                      const AmplitudeProfile& a,
                                                      const PhysicalParams& p, int order) {
  auto rule = gauss_legendre_cached(order);
  auto tab = std::make_shared<PacketTable>();
  const double mid = 0.5 * (a.k1 + a.k2);
  const double half = 0.5 * (a.k2 - a.k1);
  tab->k.resize(order);
  tab->om.resize(order);
  tab->coeff.resize(order);
  if (kind == PacketKind::step_in) {
    tab->r.resize(order); tab->t.resize(order); tab->q.resize(order);
    tab->om_q.resize(order); tab->u1.resize(order); tab->u2.resize(order);
    tab->v1.resize(order); tab->v2.resize(order);
  } else {
    tab->s1.resize(order);
    tab->s2.resize(order);
  }
  for (int i = 0; i < order; ++i) {
    const double k = mid + half * rule->nodes[i];
    const double w = half * rule->weights[i];
    const double om = omega_bar(k, p);
    tab->k[i] = k;
    tab->om[i] = om;
    tab->coeff[i] = (w * inv_sqrt_2pi / (2.0 * om)) * a.eval(k);
    switch (kind) {
      case PacketKind::free_u:
        tab->s1[i] = omega_cap(k, p);
        tab->s2[i] = omega_cap(-k, p);
        break;
      case PacketKind::free_v:
        tab->s1[i] = -omega_cap(k, p);
        tab->s2[i] = omega_cap(-k, p);
        break;
      case PacketKind::step_in: {
        const StepMode m = make_step_mode(k, p);
        tab->r[i] = m.r;
        tab->t[i] = m.t;
        tab->q[i] = m.q;
        tab->om_q[i] = omega_bar(m.q, p);
        tab->u1[i] = omega_cap(k, p);
        tab->u2[i] = omega_cap(-k, p);
        tab->v1[i] = -omega_cap(m.q, p);
        tab->v2[i] = omega_cap(-m.q, p);
        break;
      }
    }
  }
  return tab;
}

inline Spinor eval_table(PacketKind kind, const PacketTable& tab, const PhysicalParams& p,
                         const SpacetimePoint& pt) {
  const int n = static_cast<int>(tab.k.size());
  complexd c1{0.0, 0.0}, c2{0.0, 0.0};
  switch (kind) {
    case PacketKind::free_u:
      for (int i = 0; i < n; ++i) {
        const complexd ph = tab.coeff[i] * std::polar(1.0, -(tab.om[i] * pt.x0 - tab.k[i] * pt.x1));
        c1 += ph * tab.s1[i];
        c2 += ph * tab.s2[i];
      }
      break;
    case PacketKind::free_v:
      for (int i = 0; i < n; ++i) {
        const complexd ph = tab.coeff[i] * std::polar(1.0, tab.om[i] * pt.x0 - tab.k[i] * pt.x1);
        c1 += ph * tab.s1[i];
        c2 += ph * tab.s2[i];
      }
      break;
    case PacketKind::step_in:
      if (pt.x1 < 0.0) {
        for (int i = 0; i < n; ++i) {
          const complexd e0 = std::polar(1.0, -tab.om[i] * pt.x0);
          const complexd pk = std::polar(1.0, tab.k[i] * pt.x1);
          const complexd fwd = tab.coeff[i] * e0 * pk;
          const complexd bwd = tab.coeff[i] * tab.r[i] * e0 * std::conj(pk);
          c1 += fwd * tab.u1[i] + bwd * tab.u2[i];
          c2 += fwd * tab.u2[i] + bwd * tab.u1[i];
        }
      } else {
        for (int i = 0; i < n; ++i) {
          const complexd ph = tab.coeff[i] * tab.t[i] *
              std::polar(1.0, (tab.om_q[i] - p.V) * pt.x0 - tab.q[i] * pt.x1);
          c1 += ph * tab.v1[i];
          c2 += ph * tab.v2[i];
        }
      }
      break;
  }
  return {c1, c2};
}

}  // namespace detail

/// Wave packet as an evaluable spacetime field. Immutable after construction;
/// evaluation is pure and thread-safe (node tables are built lazily per order
/// under a lock, then shared read-only).
class PacketField {
public:
  PacketField(PacketKind kind, AmplitudeProfile a, PhysicalParams p, QuadConfig qc = {})
      : kind_(kind), a_(std::move(a)), p_(p), qc_(qc) {
    if (!(a_.k2 > a_.k1)) {
      throw DomainError(DomainFault::bad_argument, "amplitude support requires k1 < k2");
    }
    if (kind_ == PacketKind::step_in) {
      require_step_window(a_, p_);
      // d(q x1)/dk magnifies the x1-induced oscillation by |s'(k)|.
      auto sprime = [this](double k) {
        const double q = s_map(k, p_);
        return k * omega_bar(q, p_) / (omega_bar(k, p_) * q);
      };
      phase_mag_ = 1.15 * std::max({1.0, sprime(a_.k1), sprime(0.5 * (a_.k1 + a_.k2)),
                                    sprime(a_.k2)});
    }
  }

  PacketKind kind() const { return kind_; }
  const AmplitudeProfile& profile() const { return a_; }
  const PhysicalParams& params() const { return p_; }
  const QuadConfig& quad_config() const { return qc_; }

  /// Order needed at pt: ~0.7 of the half phase range, rounded up to 64.
  int order_for(const SpacetimePoint& pt) const {
    const double theta =
        0.5 * (a_.k2 - a_.k1) * (std::abs(pt.x0) + phase_mag_ * std::abs(pt.x1));
    int n = std::max(qc_.base_order, static_cast<int>(std::ceil(0.7 * theta)) + 32);
    n = ((n + 63) / 64) * 64;
    if (n > qc_.max_order) {
      throw QuadratureNotConverged("required quadrature order " + std::to_string(n) +
                                   " exceeds cap " + std::to_string(qc_.max_order));
    }
    return n;
  }

  Spinor value_at_order(const SpacetimePoint& pt, int order) const {
    return detail::eval_table(kind_, *table(order), p_, pt);
  }

  Spinor value(const SpacetimePoint& pt) const {
    const int n = order_for(pt);
    const Spinor v = value_at_order(pt, n);
    if (!qc_.check) return v;
    const Spinor w = value_at_order(pt, 2 * n);
    const double diff = std::max(std::abs(w.c1 - v.c1), std::abs(w.c2 - v.c2));
    if (diff > qc_.tol) {
      throw QuadratureNotConverged("order doubling moved packet value by " +
                                   std::to_string(diff) + " (> tol) at x0=" +
                                   std::to_string(pt.x0) + " x1=" + std::to_string(pt.x1));
    }
    return w;
  }

  CurrentVector current(const SpacetimePoint& pt) const { return current_of(value(pt)); }

  FlowSample flow(double x0, double x1) const {
    const CurrentVector j = current({x0, x1});
    return {j.j1 / j.j0, j.j0};
  }

private:
  std::shared_ptr<const detail::PacketTable> table(int order) const {
    std::lock_guard<std::mutex> lock(mtx_);
    auto it = tables_.find(order);
    if (it != tables_.end()) return it->second;
    auto tab = detail::build_table(kind_, a_, p_, order);
    tables_.emplace(order, tab);
    return tab;
  }

  PacketKind kind_;
  AmplitudeProfile a_;
  PhysicalParams p_;
  QuadConfig qc_;
  double phase_mag_{1.0};
  mutable std::mutex mtx_;
  mutable std::map<int, std::shared_ptr<const detail::PacketTable>> tables_;
};

/// One-shot packet evaluation with an explicit rule (no order adaptation).
inline Spinor eval_packet(PacketKind kind, const AmplitudeProfile& a, const PhysicalParams& p,
                          const SpacetimePoint& pt, const QuadratureRule& rule) {
  if (kind == PacketKind::step_in) require_step_window(a, p);
  const double mid = 0.5 * (a.k1 + a.k2);
  const double half = 0.5 * (a.k2 - a.k1);
  complexd c1{0.0, 0.0}, c2{0.0, 0.0};
  for (int i = 0; i < rule.order; ++i) {
    const double k = mid + half * rule.nodes[i];
    const double w = half * rule.weights[i];
    const complexd mu = (w * inv_sqrt_2pi / (2.0 * omega_bar(k, p))) * a.eval(k);
    Spinor s;
    switch (kind) {
      case PacketKind::free_u:
        s = std::polar(1.0, -(omega_bar(k, p) * pt.x0 - k * pt.x1)) * spinor_u(k, p);
        break;
      case PacketKind::free_v:
        s = std::polar(1.0, omega_bar(k, p) * pt.x0 - k * pt.x1) * spinor_v(k, p);
        break;
      case PacketKind::step_in: {
        const StepMode m = make_step_mode(k, p);
        const SpacetimePoint q{pt.x0, pt.x1};
        s = std::sqrt(2.0 * M_PI) *
            (pt.x1 < 0.0 ? eval_step_mode_minus(m, q) : eval_step_mode_plus(m, q));
        break;
      }
    }
    c1 += mu * s.c1;
    c2 += mu * s.c2;
  }
  return {c1, c2};
}

/// Gated evaluation: adaptive order with doubling check (QuadratureNotConverged
/// on failure).
inline Spinor eval_packet_checked(PacketKind kind, const AmplitudeProfile& a,
                                  const PhysicalParams& p, const SpacetimePoint& pt,
                                  QuadConfig qc = {}) {
  qc.check = true;
  PacketField field(kind, a, p, qc);
  return field.value(pt);
}

inline CurrentVector packet_current(PacketKind kind, const AmplitudeProfile& a,
                                    const PhysicalParams& p, const SpacetimePoint& pt,
                                    const QuadConfig& qc = {}) {
  PacketField field(kind, a, p, qc);
  return field.current(pt);
}

/// Norm squared in Fourier space: ||psi||^2 = int |a(k)|^2 dk / (2 omega_bar(k)).
/// Valid for U[a], V[a] and, by norm conservation, for U^in[a].
inline double normsq_kspace(const AmplitudeProfile& a, const PhysicalParams& p,
                            int order = 512) {
  auto weightfn = [&](double k) { return std::norm(a.eval(k)) / (2.0 * omega_bar(k, p)); };
  const double lo = integrate(weightfn, a.k1, a.k2, *gauss_legendre_cached(order));
  const double hi = integrate(weightfn, a.k1, a.k2, *gauss_legendre_cached(2 * order));
  if (std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(hi))) {
    throw QuadratureNotConverged("k-space norm integral not converged");
  }
  return hi;
}

/// Spatial quadrature policy for densities along a time slice.
struct SpatialQuad {
  double panel_width{8.0};
  int order{24};
  double edge_floor_rel{1e-12};
};

/// Integral of j0 over [x_lo, x_hi] at time tau (no window check).
inline double mass_in_interval(const PacketField& field, double tau, double x_lo, double x_hi,
                               const SpatialQuad& sq = {}) {
  if (!(x_hi > x_lo)) return 0.0;
  auto j0 = [&](double x) { return field.current({tau, x}).j0; };
  return integrate_panels(j0, x_lo, x_hi, sq.panel_width, *gauss_legendre_cached(sq.order));
}

/// ||psi_tau|| over a finite window. Throws WindowTooSmall when the boundary
/// density exceeds edge_floor_rel times the peak density inside the window
/// (mass would be escaping the window).
inline double norm_at_time(PacketKind kind, const AmplitudeProfile& a, const PhysicalParams& p,
                           double tau, double x_lo, double x_hi, const QuadConfig& qc = {},
                           const SpatialQuad& sq = {}) {
  if (!(x_hi > x_lo)) {
    throw DomainError(DomainFault::bad_argument, "norm window is empty");
  }
  PacketField field(kind, a, p, qc);
  double peak = 0.0;
  auto j0 = [&](double x) {
    const double v = field.current({tau, x}).j0;
    peak = std::max(peak, v);
    return v;
  };
  const double mass =
      integrate_panels(j0, x_lo, x_hi, sq.panel_width, *gauss_legendre_cached(sq.order));
  const double floor = sq.edge_floor_rel * peak;
  const double lo_edge = field.current({tau, x_lo}).j0;
  const double hi_edge = field.current({tau, x_hi}).j0;
  if (lo_edge > floor || hi_edge > floor) {
    throw WindowTooSmall("edge density " + std::to_string(std::max(lo_edge, hi_edge)) +
                         " exceeds floor " + std::to_string(floor) + " at tau = " +
                         std::to_string(tau));
  }
  return std::sqrt(mass);
}

}  // namespace kleinflow
