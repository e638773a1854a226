#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fepinn/ad/jet.hpp"

namespace fepinn {

enum class ProblemId {
  Wave,
  Reaction,
  Convection,
  Diffusion,
  Heat2D,
  Burgers,
  AllenCahn,
  NonHomogHeat,
};

/// Axis-aligned space-time box. y bounds are meaningful only for space_dim 2.
struct DomainBox {
  int space_dim = 1;
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  double t_lo = 0.0, t_hi = 1.0;
};

enum class Face { XLo, XHi, YLo, YHi };
enum class BcKind { Dirichlet, Periodic, Robin };

/// One boundary condition. Periodic entries pair the face with its opposite
/// (listed once, on the low face). Robin means u_x + robin_h * u = g(t) on the
/// given x-face.
struct BcSpec {
  Face face = Face::XLo;
  BcKind kind = BcKind::Dirichlet;
  std::function<double(double x, double y, double t)> g;
  double robin_h = 0.0;
};

enum class IcOrder { Value, TimeDeriv };

struct IcSpec {
  IcOrder order = IcOrder::Value;
  std::function<double(double x, double y)> u0;
};

/// A benchmark problem: domain, PDE coefficients, boundary/initial data, and
/// which derivatives its residual reads.
struct PdeProblem {
  ProblemId id = ProblemId::Wave;
  std::string name;  ///< config identifier, e.g. "wave"
  DomainBox box;

  // Named coefficients (meaning depends on the PDE; unused ones stay 0).
  double beta = 0.0;  ///< wave stiffness (u_tt - beta u_xx) or convection speed
  double rho = 0.0;   ///< reaction rate
  double nu = 0.0;    ///< viscosity / interface coefficient
  double kx = 0.0, ky = 0.0;  ///< anisotropic diffusion coefficients (2-D heat)

  unsigned residual_mask = 0;  ///< Deriv bits used by the residual
  std::vector<BcSpec> bcs;
  std::vector<IcSpec> ics;
  bool periodic = false;      ///< x-periodic (pairs x_lo with x_hi)
  bool closed_form = false;   ///< analytic reference available

  /// Harmonic feature-init divisor per axis: the domain length under
  /// homogeneous Dirichlet conditions, 1 otherwise.
  double harmonic_kx = 1.0, harmonic_ky = 1.0;
};

PdeProblem make_problem(ProblemId id);
PdeProblem make_problem(const std::string& name);
const std::vector<std::string>& problem_names();

/// u and its tracked partial derivatives at one point.
template <class T>
struct BundleT {
  T u{}, ux{}, uy{}, ut{}, uxx{}, uyy{}, utt{};

  T& by(Deriv d) {
    switch (d) {
      case Deriv::U: return u;
      case Deriv::Ux: return ux;
      case Deriv::Uy: return uy;
      case Deriv::Ut: return ut;
      case Deriv::Uxx: return uxx;
      case Deriv::Uyy: return uyy;
      default: return utt;
    }
  }
  const T& by(Deriv d) const { return const_cast<BundleT*>(this)->by(d); }
};

using Bundle = BundleT<double>;

namespace forcing {

/// Source term of the (repaired) diffusion benchmark: residual u_t - u_xx - f.
inline double diffusion(double x, double t) {
  constexpr double pi = 3.14159265358979323846;
  return std::exp(-t) * (pi * pi - 1.0) * std::sin(pi * x);
}

/// Source term of the non-homogeneous heat benchmark: residual u_t - u_xx - f.
inline double non_homog_heat(double x, double t) {
  constexpr double pi = 3.14159265358979323846;
  const double a = 6.3 * pi;
  return 4.0 * pi * pi * std::sin(2.0 * pi * x) * std::cos(pi * t) -
         pi * std::sin(2.0 * pi * x) * std::sin(pi * t) +
         0.6 * a * a * std::sin(a * x) * std::sin(3.0 * pi * t) +
         1.8 * pi * std::sin(a * x) * std::cos(3.0 * pi * t);
}

}  // namespace forcing

/// PDE residual at one point given the derivative bundle. Templated so the
/// same code path serves plain evaluation, gradients, and Hessian products.
template <class T>
T pde_residual(const PdeProblem& p, const BundleT<T>& b, double x, double /*y*/, double t) {
  switch (p.id) {
    case ProblemId::Wave:
      return b.utt - p.beta * b.uxx;
    case ProblemId::Reaction:
      return b.ut - p.rho * (b.u * (1.0 - b.u));
    case ProblemId::Convection:
      return b.ut + p.beta * b.ux;
    case ProblemId::Diffusion:
      return b.ut - b.uxx - forcing::diffusion(x, t);
    case ProblemId::Heat2D:
      return b.ut - p.kx * b.uxx - p.ky * b.uyy;
    case ProblemId::Burgers:
      return b.ut + b.u * b.ux - (p.nu / 3.14159265358979323846) * b.uxx;
    case ProblemId::AllenCahn:
      return b.ut - p.nu * b.uxx + 5.0 * (b.u * b.u * b.u) - 5.0 * b.u;
    case ProblemId::NonHomogHeat:
      return b.ut - b.uxx - forcing::non_homog_heat(x, t);
  }
  return T(0.0);
}

/// Partial derivatives of the residual with respect to each bundle entry.
template <class T>
BundleT<T> pde_residual_partials(const PdeProblem& p, const BundleT<T>& b) {
  BundleT<T> d;
  switch (p.id) {
    case ProblemId::Wave:
      d.utt = T(1.0);
      d.uxx = T(-p.beta);
      break;
    case ProblemId::Reaction:
      d.ut = T(1.0);
      d.u = -p.rho * (1.0 - 2.0 * b.u);
      break;
    case ProblemId::Convection:
      d.ut = T(1.0);
      d.ux = T(p.beta);
      break;
    case ProblemId::Diffusion:
    case ProblemId::NonHomogHeat:
      d.ut = T(1.0);
      d.uxx = T(-1.0);
      break;
    case ProblemId::Heat2D:
      d.ut = T(1.0);
      d.uxx = T(-p.kx);
      d.uyy = T(-p.ky);
      break;
    case ProblemId::Burgers:
      d.ut = T(1.0);
      d.u = b.ux;
      d.ux = b.u;
      d.uxx = T(-p.nu / 3.14159265358979323846);
      break;
    case ProblemId::AllenCahn:
      d.ut = T(1.0);
      d.uxx = T(-p.nu);
      d.u = 15.0 * (b.u * b.u) - 5.0;
      break;
  }
  return d;
}

}  // namespace fepinn
