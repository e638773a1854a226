#pragma once

#include <array>
#include <cstddef>

#include "fepinn/core/dual.hpp"

namespace fepinn {

/// Partial-derivative identifiers for the scalar field u(x[,y],t).
enum class Deriv { U, Ux, Uy, Ut, Uxx, Uyy, Utt };

/// Bitmask over Deriv, used to request/validate tracked derivatives.
enum DerivMask : unsigned {
  kU = 1u << 0,
  kUx = 1u << 1,
  kUy = 1u << 2,
  kUt = 1u << 3,
  kUxx = 1u << 4,
  kUyy = 1u << 5,
  kUtt = 1u << 6,
};

inline unsigned deriv_bit(Deriv d) { return 1u << static_cast<int>(d); }

// ---------------------------------------------------------------------------
// Axis layouts.
//
// A jet carries the value of an intermediate quantity together with selected
// first and second derivatives with respect to the *inputs* of the network.
// The layout fixes which components exist and how first/second derivatives
// pair up along each axis. Mixed second derivatives are never tracked; no
// residual in the suite reads one.
// ---------------------------------------------------------------------------

/// Value-only layout: plain forward evaluation (prediction grids, targets).
struct AxesVal {
  static constexpr int n_comp = 1;
  static constexpr int n_axis = 0;
  static constexpr std::array<int, 1> d1{-1};
  static constexpr std::array<int, 1> d2{-1};
  static constexpr int axis_x = -1, axis_y = -1, axis_t = -1;
  static constexpr unsigned supported = kU;
  static constexpr int comp(Deriv d) { return d == Deriv::U ? 0 : -1; }
};

/// One spatial dimension: tracks u, u_x, u_t, u_xx, u_tt.
struct Axes1D {
  static constexpr int n_comp = 5;
  static constexpr int n_axis = 2;  // x, t
  static constexpr std::array<int, 2> d1{1, 2};
  static constexpr std::array<int, 2> d2{3, 4};
  static constexpr int axis_x = 0, axis_y = -1, axis_t = 1;
  static constexpr unsigned supported = kU | kUx | kUt | kUxx | kUtt;
  static constexpr int comp(Deriv d) {
    switch (d) {
      case Deriv::U: return 0;
      case Deriv::Ux: return 1;
      case Deriv::Ut: return 2;
      case Deriv::Uxx: return 3;
      case Deriv::Utt: return 4;
      default: return -1;
    }
  }
};

/// Two spatial dimensions: tracks u, u_x, u_y, u_t, u_xx, u_yy (no u_tt).
struct Axes2D {
  static constexpr int n_comp = 6;
  static constexpr int n_axis = 3;  // x, y, t
  static constexpr std::array<int, 3> d1{1, 2, 3};
  static constexpr std::array<int, 3> d2{4, 5, -1};
  static constexpr int axis_x = 0, axis_y = 1, axis_t = 2;
  static constexpr unsigned supported = kU | kUx | kUy | kUt | kUxx | kUyy;
  static constexpr int comp(Deriv d) {
    switch (d) {
      case Deriv::U: return 0;
      case Deriv::Ux: return 1;
      case Deriv::Uy: return 2;
      case Deriv::Ut: return 3;
      case Deriv::Uxx: return 4;
      case Deriv::Uyy: return 5;
      default: return -1;
    }
  }
};

/// Truncated Taylor carrier: value plus the layout's input derivatives.
/// T is double for plain evaluation/gradients and Dual for Hessian products.
template <class T, class A>
struct Jet {
  using Axes = A;
  std::array<T, A::n_comp> c{};

  T& operator[](int i) { return c[i]; }
  const T& operator[](int i) const { return c[i]; }
  T& val() { return c[0]; }
  const T& val() const { return c[0]; }

  static Jet constant(const T& v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  /// Jet of the coordinate along `axis`: value plus unit first derivative.
  static Jet coordinate(double v, int axis) {
    Jet j;
    j.c[0] = T(v);
    j.c[A::d1[axis]] = T(1.0);
    return j;
  }
  void set_zero() { c.fill(T(0.0)); }
};

// ---------------------------------------------------------------------------
// Linear jet operations (component-wise; adjoints are the same maps).
// ---------------------------------------------------------------------------

template <class T, class A>
inline void jadd_inplace(Jet<T, A>& a, const Jet<T, A>& b) {
  for (int i = 0; i < A::n_comp; ++i) a.c[i] += b.c[i];
}

template <class T, class A>
inline Jet<T, A> jsub(const Jet<T, A>& a, const Jet<T, A>& b) {
  Jet<T, A> r;
  for (int i = 0; i < A::n_comp; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

/// a += s * b for a scalar s (which may itself be a parameter of type T).
template <class T, class A>
inline void jaxpy(const T& s, const Jet<T, A>& b, Jet<T, A>& a) {
  for (int i = 0; i < A::n_comp; ++i) a.c[i] += s * b.c[i];
}

template <class T, class A>
inline Jet<T, A> jscale(const T& s, const Jet<T, A>& a) {
  Jet<T, A> r;
  for (int i = 0; i < A::n_comp; ++i) r.c[i] = s * a.c[i];
  return r;
}

/// Component dot product; used by adjoints of scalar-times-jet terms.
template <class T, class A>
inline T jdot(const Jet<T, A>& a, const Jet<T, A>& b) {
  T s = a.c[0] * b.c[0];
  for (int i = 1; i < A::n_comp; ++i) s += a.c[i] * b.c[i];
  return s;
}

// ---------------------------------------------------------------------------
// Product rule.
// ---------------------------------------------------------------------------

template <class T, class A>
inline Jet<T, A> jmul(const Jet<T, A>& a, const Jet<T, A>& b) {
  Jet<T, A> r;
  r.c[0] = a.c[0] * b.c[0];
  for (int k = 0; k < A::n_axis; ++k) {
    const int f = A::d1[k];
    const int s = A::d2[k];
    r.c[f] = a.c[f] * b.c[0] + a.c[0] * b.c[f];
    if (s >= 0) r.c[s] = a.c[s] * b.c[0] + 2.0 * (a.c[f] * b.c[f]) + a.c[0] * b.c[s];
  }
  return r;
}

/// Reverse rule for w = a*b: accumulates into abar and bbar given wbar.
template <class T, class A>
inline void jmul_adj(const Jet<T, A>& wbar, const Jet<T, A>& a, const Jet<T, A>& b,
                     Jet<T, A>& abar, Jet<T, A>& bbar) {
  abar.c[0] += wbar.c[0] * b.c[0];
  bbar.c[0] += wbar.c[0] * a.c[0];
  for (int k = 0; k < A::n_axis; ++k) {
    const int f = A::d1[k];
    const int s = A::d2[k];
    abar.c[0] += wbar.c[f] * b.c[f];
    bbar.c[0] += wbar.c[f] * a.c[f];
    abar.c[f] += wbar.c[f] * b.c[0];
    bbar.c[f] += wbar.c[f] * a.c[0];
    if (s >= 0) {
      abar.c[0] += wbar.c[s] * b.c[s];
      bbar.c[0] += wbar.c[s] * a.c[s];
      abar.c[f] += 2.0 * (wbar.c[s] * b.c[f]);
      bbar.c[f] += 2.0 * (wbar.c[s] * a.c[f]);
      abar.c[s] += wbar.c[s] * b.c[0];
      bbar.c[s] += wbar.c[s] * a.c[0];
    }
  }
}

// ---------------------------------------------------------------------------
// Unary chain rule through a scalar map g, given its derivatives at the
// primal point. g3 is needed only by the reverse pass (the adjoint of the
// second-derivative components differentiates g2 once more).
// ---------------------------------------------------------------------------

template <class T>
struct ChainDerivs {
  T g0{}, g1{}, g2{}, g3{};
};

template <class T, class A>
inline Jet<T, A> jchain(const Jet<T, A>& u, const ChainDerivs<T>& g) {
  Jet<T, A> r;
  r.c[0] = g.g0;
  for (int k = 0; k < A::n_axis; ++k) {
    const int f = A::d1[k];
    const int s = A::d2[k];
    r.c[f] = g.g1 * u.c[f];
    if (s >= 0) r.c[s] = g.g1 * u.c[s] + g.g2 * (u.c[f] * u.c[f]);
  }
  return r;
}

template <class T, class A>
inline void jchain_adj(const Jet<T, A>& wbar, const Jet<T, A>& u, const ChainDerivs<T>& g,
                       Jet<T, A>& ubar) {
  ubar.c[0] += wbar.c[0] * g.g1;
  for (int k = 0; k < A::n_axis; ++k) {
    const int f = A::d1[k];
    const int s = A::d2[k];
    ubar.c[0] += wbar.c[f] * (g.g2 * u.c[f]);
    ubar.c[f] += wbar.c[f] * g.g1;
    if (s >= 0) {
      ubar.c[0] += wbar.c[s] * (g.g2 * u.c[s] + g.g3 * (u.c[f] * u.c[f]));
      ubar.c[f] += wbar.c[s] * (2.0 * (g.g2 * u.c[f]));
      ubar.c[s] += wbar.c[s] * g.g1;
    }
  }
}

// Derivative quadruples for the elementary maps the pipeline composes.

template <class T>
inline ChainDerivs<T> cd_recip(const T& a) {
  const T inv = 1.0 / a;
  const T inv2 = inv * inv;
  return {inv, -inv2, 2.0 * (inv2 * inv), -6.0 * (inv2 * inv2)};
}

template <class T>
inline ChainDerivs<T> cd_sqrt(const T& a) {
  using std::sqrt;
  const T s = sqrt(a);
  const T inv_s = 1.0 / s;
  const T inv_s3 = inv_s * inv_s * inv_s;
  return {s, 0.5 * inv_s, -0.25 * inv_s3, 0.375 * (inv_s3 * inv_s * inv_s)};
}

template <class T>
inline ChainDerivs<T> cd_exp(const T& a) {
  using std::exp;
  const T e = exp(a);
  return {e, e, e, e};
}

template <class T>
inline ChainDerivs<T> cd_sin(const T& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a), c = cos(a);
  return {s, c, -s, -c};
}

template <class T>
inline ChainDerivs<T> cd_cos(const T& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a), c = cos(a);
  return {c, -s, -c, s};
}

template <class T>
inline ChainDerivs<T> cd_tanh(const T& a) {
  using std::tanh;
  const T y = tanh(a);
  const T g1 = 1.0 - y * y;
  return {y, g1, -2.0 * (y * g1), g1 * (6.0 * (y * y) - 2.0)};
}

}  // namespace fepinn
