#pragma once

#include <cmath>
#include <vector>

#include "fepinn/ad/jet.hpp"
#include "fepinn/pde/problem.hpp"

namespace fepinn {

/// Problem-specific closed-form input features. Each is a fixed function of
/// the spatial coordinates chosen from the structure of the solution family
/// (forcing modes, initial profiles, separable factors). They carry no
/// trainable parameters and are concatenated after the Fourier block.
enum class DomainFeatureId {
  WaveSinPiX,        // sin(pi x)
  WaveSin4PiX,       // sin(4 pi x)
  ReactionGaussian,  // exp(-(x-pi)^2 / (2 (pi/4)^2))
  ConvectionSinX,    // sin(x)
  Heat2dSin20PiX,    // sin(20 pi x)
  Heat2dSinPiY,      // sin(pi y)
  Heat2dProduct,     // sin(20 pi x) sin(pi y)
  BurgersNegSinPiX,  // -sin(pi x)
  DiffusionSinPiX,   // sin(pi x)
  AllenCahnX2,       // x^2
  AllenCahnCosPiX,   // cos(pi x)
  AllenCahnX2CosPiX, // x^2 cos(pi x)
  NhHeatSin2PiX,     // sin(2 pi x)
  NhHeatX,           // x
};

/// Registered feature list per problem (may be empty).
const std::vector<DomainFeatureId>& dkf_list(ProblemId id);

namespace jets {

/// Jet of sin/cos(freq * coordinate) along `axis`; value-only when the layout
/// does not track that axis.
template <class T, class A>
inline Jet<T, A> trig_axis(double freq, double coord, int axis, bool is_sin) {
  Jet<T, A> j;
  const double a = freq * coord;
  const double s = std::sin(a), c = std::cos(a);
  j.c[0] = T(is_sin ? s : c);
  if (axis >= 0 && axis < A::n_axis) {
    j.c[A::d1[axis]] = T(is_sin ? freq * c : -freq * s);
    const int d2 = A::d2[axis];
    if (d2 >= 0) j.c[d2] = T(-freq * freq * (is_sin ? s : c));
  }
  return j;
}

/// Jet of coordinate^power (power 1 or 2) along `axis`.
template <class T, class A>
inline Jet<T, A> monomial_axis(double coord, int axis, int power) {
  Jet<T, A> j;
  if (power == 0) {
    j.c[0] = T(1.0);
    return j;
  }
  j.c[0] = T(power == 1 ? coord : coord * coord);
  if (axis >= 0 && axis < A::n_axis) {
    j.c[A::d1[axis]] = T(power == 1 ? 1.0 : 2.0 * coord);
    const int d2 = A::d2[axis];
    if (d2 >= 0 && power == 2) j.c[d2] = T(2.0);
  }
  return j;
}

}  // namespace jets

/// Evaluates one domain feature as a jet at (x, y). All registered features
/// are time-independent, so the time components are identically zero.
template <class T, class A>
Jet<T, A> dkf_jet(DomainFeatureId id, double x, double y) {
  constexpr double pi = 3.14159265358979323846;
  using jets::monomial_axis;
  using jets::trig_axis;
  switch (id) {
    case DomainFeatureId::WaveSinPiX:
    case DomainFeatureId::DiffusionSinPiX:
      return trig_axis<T, A>(pi, x, A::axis_x, true);
    case DomainFeatureId::WaveSin4PiX:
      return trig_axis<T, A>(4.0 * pi, x, A::axis_x, true);
    case DomainFeatureId::ReactionGaussian: {
      const double s = pi / 4.0;
      Jet<T, A> w;  // x - pi
      w.c[0] = T(x - pi);
      if (A::axis_x >= 0) w.c[A::d1[A::axis_x]] = T(1.0);
      const Jet<T, A> q = jmul(w, w);
      const Jet<T, A> arg = jscale(T(-0.5 / (s * s)), q);
      return jchain(arg, cd_exp(arg.c[0]));
    }
    case DomainFeatureId::ConvectionSinX:
      return trig_axis<T, A>(1.0, x, A::axis_x, true);
    case DomainFeatureId::Heat2dSin20PiX:
      return trig_axis<T, A>(20.0 * pi, x, A::axis_x, true);
    case DomainFeatureId::Heat2dSinPiY:
      return trig_axis<T, A>(pi, y, A::axis_y, true);
    case DomainFeatureId::Heat2dProduct:
      return jmul(trig_axis<T, A>(20.0 * pi, x, A::axis_x, true),
                  trig_axis<T, A>(pi, y, A::axis_y, true));
    case DomainFeatureId::BurgersNegSinPiX:
      return jscale(T(-1.0), trig_axis<T, A>(pi, x, A::axis_x, true));
    case DomainFeatureId::AllenCahnX2:
      return monomial_axis<T, A>(x, A::axis_x, 2);
    case DomainFeatureId::AllenCahnCosPiX:
      return trig_axis<T, A>(pi, x, A::axis_x, false);
    case DomainFeatureId::AllenCahnX2CosPiX:
      return jmul(monomial_axis<T, A>(x, A::axis_x, 2),
                  trig_axis<T, A>(pi, x, A::axis_x, false));
    case DomainFeatureId::NhHeatSin2PiX:
      return trig_axis<T, A>(2.0 * pi, x, A::axis_x, true);
    case DomainFeatureId::NhHeatX:
      return monomial_axis<T, A>(x, A::axis_x, 1);
  }
  return Jet<T, A>{};
}

/// Value-level evaluation of a problem's registered feature list.
std::vector<double> dkf_features(ProblemId id, double x, double y, double t);

}  // namespace fepinn
