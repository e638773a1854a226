#pragma once

#include <cmath>

namespace fepinn {

/// First-order forward-mode dual number over double.
///
/// Used for exact Hessian-vector products: the whole gradient computation is
/// instantiated with Dual scalars, parameters are seeded with the probe
/// direction in the tangent slot, and the tangent of the gradient is H v.
struct Dual {
  double v = 0.0;  ///< primal value
  double d = 0.0;  ///< tangent

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit promotion is intended
  Dual(double value, double tangent) : v(value), d(tangent) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator+(const Dual& a) { return a; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

inline Dual sin(const Dual& a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -a.d * std::sin(a.v)}; }
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return {e, a.d * e};
}
inline Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return {s, s > 0.0 ? a.d * 0.5 / s : 0.0};
}
inline Dual tanh(const Dual& a) {
  const double t = std::tanh(a.v);
  return {t, a.d * (1.0 - t * t)};
}
inline Dual erf(const Dual& a) {
  // d/dx erf(x) = 2/sqrt(pi) * exp(-x^2)
  return {std::erf(a.v), a.d * 1.1283791670955125738961589031215 * std::exp(-a.v * a.v)};
}
inline Dual abs(const Dual& a) { return a.v < 0.0 ? -a : a; }

/// Extracts the primal value of a scalar (identity for double); lets
/// branching code compile for both scalar types.
inline double primal(double x) { return x; }
inline double primal(const Dual& x) { return x.v; }

}  // namespace fepinn
