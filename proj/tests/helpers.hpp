#pragma once

// Test-only oracles, independent of the library's computation paths:
// bisection for the matching map, the linear matching system solved
// numerically, and finite-difference residuals of the field equations.

#include <array>
#include <cmath>
#include <stdexcept>

#include "kleinflow/dispersion.hpp"
#include "kleinflow/free_modes.hpp"
#include "kleinflow/spinor.hpp"

namespace oracle {

using kleinflow::PhysicalParams;
using kleinflow::SpacetimePoint;
using kleinflow::Spinor;
using kleinflow::complexd;

/// Solves omega_bar(q) = V - omega_bar(k) for q > 0 by bisection.
inline double bisect_s(double k, const PhysicalParams& p) {
  const double target = p.V - kleinflow::omega_bar(k, p);
  double lo = 0.0;
  double hi = p.V;  // omega_bar(V) > V - kappa >= target
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kleinflow::omega_bar(mid, p) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Gaussian elimination with partial pivoting for a dense n x n system.
template <std::size_t N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> A,
                                   std::array<double, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    if (A[col][col] == 0.0) throw std::runtime_error("singular matrix");
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < N; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < N; ++c) acc -= A[i][c] * x[c];
    x[i] = acc / A[i][i];
  }
  return x;
}

struct MatchingCoefficients {
  double beta;   // reflection
  double gamma;  // transmission
};

/// Solves the spinor matching condition at the origin,
///   alpha u(k) + beta u(-k) = gamma v(q) + delta v(-q),
/// as a 4x4 linear system with the normalization rows alpha = 1, delta = 0.
inline MatchingCoefficients solve_matching(double k, const PhysicalParams& p) {
  const double q = bisect_s(k, p);
  const auto Om = [&](double x) { return kleinflow::omega_cap(x, p); };
  std::array<std::array<double, 4>, 4> A{{
      {Om(k), Om(-k), Om(q), Om(-q)},     // component 1 (v(q) enters with -(-Om(q)))
      {Om(-k), Om(k), -Om(-q), -Om(q)},   // component 2
      {1.0, 0.0, 0.0, 0.0},
      {0.0, 0.0, 0.0, 1.0},
  }};
  std::array<double, 4> b{0.0, 0.0, 1.0, 0.0};
  const auto sol = solve_linear<4>(A, b);
  return {sol[1], sol[2]};
}

/// Max component residual of the step-potential Dirac system at pt, with the
/// derivatives replaced by central differences of step h.
template <typename Field>
double dirac_residual(Field&& psi, const SpacetimePoint& pt, const PhysicalParams& p,
                      double h = 1e-4) {
  const Spinor f = psi(pt);
  const Spinor ft1 = psi({pt.x0 + h, pt.x1});
  const Spinor ft0 = psi({pt.x0 - h, pt.x1});
  const Spinor fx1 = psi({pt.x0, pt.x1 + h});
  const Spinor fx0 = psi({pt.x0, pt.x1 - h});
  const complexd i(0.0, 1.0);
  const complexd d0c1 = (ft1.c1 - ft0.c1) / (2.0 * h);
  const complexd d0c2 = (ft1.c2 - ft0.c2) / (2.0 * h);
  const complexd d1c1 = (fx1.c1 - fx0.c1) / (2.0 * h);
  const complexd d1c2 = (fx1.c2 - fx0.c2) / (2.0 * h);
  const double pot = pt.x1 >= 0.0 ? p.V : 0.0;
  const complexd r1 = i * d0c1 - (-i * d1c1 + pot * f.c1 + p.kappa * f.c2);
  const complexd r2 = i * d0c2 - (p.kappa * f.c1 + i * d1c2 + pot * f.c2);
  return std::max(std::abs(r1), std::abs(r2));
}

/// Central-difference divergence d0 j0 + d1 j1 of a current field at pt.
template <typename CurrentField>
double divergence(CurrentField&& j, const SpacetimePoint& pt, double h = 1e-3) {
  const double d0 = (j({pt.x0 + h, pt.x1}).j0 - j({pt.x0 - h, pt.x1}).j0) / (2.0 * h);
  const double d1 = (j({pt.x0, pt.x1 + h}).j1 - j({pt.x0, pt.x1 - h}).j1) / (2.0 * h);
  return std::abs(d0 + d1);
}

}  // namespace oracle
