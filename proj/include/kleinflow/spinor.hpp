#pragma once

#include <complex>

namespace kleinflow {

using complexd = std::complex<double>;

/// Two-component complex spinor with respect to the orthonormal basis (e1, e2).
struct Spinor {
  complexd c1{0.0, 0.0};
  complexd c2{0.0, 0.0};

  friend Spinor operator+(const Spinor& a, const Spinor& b) {
    return {a.c1 + b.c1, a.c2 + b.c2};
  }
  friend Spinor operator-(const Spinor& a, const Spinor& b) {
    return {a.c1 - b.c1, a.c2 - b.c2};
  }
  friend Spinor operator*(const complexd& z, const Spinor& s) {
    return {z * s.c1, z * s.c2};
  }
  friend Spinor operator*(double z, const Spinor& s) { return {z * s.c1, z * s.c2}; }
  friend Spinor operator-(const Spinor& s) { return {-s.c1, -s.c2}; }
};

/// Event (x0, x1) in the 1+1-d chart, units with hbar = c = 1.
struct SpacetimePoint {
  double x0{0.0};
  double x1{0.0};
};

/// Probability current (j0, j1); j0 >= 0 and j0^2 - j1^2 >= 0 for spinor currents.
struct CurrentVector {
  double j0{0.0};
  double j1{0.0};
};

/// gamma^0: swaps the two components.
inline Spinor gamma0(const Spinor& s) { return {s.c2, s.c1}; }

/// gamma^1: (c1, c2) -> (-c2, c1); squares to -id.
inline Spinor gamma1(const Spinor& s) { return {-s.c2, s.c1}; }

/// Sesquilinear scalar product S, conjugate-linear in the first argument.
inline complexd scalar_inner(const Spinor& v, const Spinor& w) {
  return std::conj(v.c1) * w.c1 + std::conj(v.c2) * w.c2;
}

/// Lorentz-invariant pairing L(v, w) = S(v, gamma0 w).
inline complexd lorentz_inner(const Spinor& v, const Spinor& w) {
  return std::conj(v.c2) * w.c1 + std::conj(v.c1) * w.c2;
}

/// Pointwise current of a spinor value: j0 = |c1|^2 + |c2|^2, j1 = |c1|^2 - |c2|^2.
/// Satisfies j0^2 - j1^2 = 4 |c1 c2|^2.
inline CurrentVector current_of(const Spinor& s) {
  const double a = std::norm(s.c1);
  const double b = std::norm(s.c2);
  return {a + b, a - b};
}

}  // namespace kleinflow
