#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kleinflow/errors.hpp"

namespace kleinflow {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order{0};

  static QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw DomainError(DomainFault::bad_argument, "quadrature order must be >= 1");
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double eps = 1e-15;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      // Newton iteration on P_n, starting from the Chebyshev-like guess.
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) <= eps) break;
      }
      rule.nodes[i] = -z;
      rule.nodes[n - 1 - i] = z;
      rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
  }
};

/// Process-wide cache; rules are immutable once built.
inline std::shared_ptr<const QuadratureRule> gauss_legendre_cached(int n) {
  static std::mutex mtx;
  static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::gauss_legendre(n));
  cache.emplace(n, rule);
  return rule;
}

/// Integrate f over [a, b] with a single mapped rule.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

/// Composite integration: uniform panels of width <= panel_width, same rule per panel.
template <typename F>
double integrate_panels(F&& f, double a, double b, double panel_width,
                        const QuadratureRule& rule) {
  if (!(b > a)) return 0.0;
  const std::size_t n_panels =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / panel_width)));
  const double w = (b - a) / static_cast<double>(n_panels);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_panels; ++i) {
    sum += integrate(f, a + i * w, a + (i + 1) * w, rule);
  }
  return sum;
}

}  // namespace kleinflow
