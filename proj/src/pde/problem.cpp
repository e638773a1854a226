#include "fepinn/pde/problem.hpp"

#include <cmath>

#include "fepinn/core/errors.hpp"

namespace fepinn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double zero3(double, double, double) { return 0.0; }

/// Gaussian bump centred at pi used by the reaction benchmark.
double reaction_bump(double x) {
  const double s = kPi / 4.0;
  const double d = x - kPi;
  return std::exp(-d * d / (2.0 * s * s));
}

}  // namespace

PdeProblem make_problem(ProblemId id) {
  PdeProblem p;
  p.id = id;
  switch (id) {
    case ProblemId::Wave: {
      p.name = "wave";
      p.box = {1, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
      p.beta = 4.0;
      p.residual_mask = kUtt | kUxx;
      p.bcs.push_back({Face::XLo, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::XHi, BcKind::Dirichlet, zero3, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) {
                         return std::sin(kPi * x) + 0.5 * std::sin(4.0 * kPi * x);
                       }});
      p.ics.push_back({IcOrder::TimeDeriv, [](double, double) { return 0.0; }});
      p.closed_form = true;
      p.harmonic_kx = 1.0;  // homogeneous Dirichlet on [0,1]
      break;
    }
    case ProblemId::Reaction: {
      p.name = "reaction";
      p.box = {1, 0.0, 2.0 * kPi, 0.0, 1.0, 0.0, 1.0};
      p.rho = 5.0;
      p.residual_mask = kU | kUt;
      p.periodic = true;
      p.bcs.push_back({Face::XLo, BcKind::Periodic, nullptr, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) { return reaction_bump(x); }});
      p.closed_form = true;
      break;
    }
    case ProblemId::Convection: {
      p.name = "convection";
      p.box = {1, 0.0, 2.0 * kPi, 0.0, 1.0, 0.0, 1.0};
      p.beta = 0.1;
      p.residual_mask = kUt | kUx;
      p.periodic = true;
      p.bcs.push_back({Face::XLo, BcKind::Periodic, nullptr, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) { return std::sin(x); }});
      p.closed_form = true;
      break;
    }
    case ProblemId::Diffusion: {
      p.name = "diffusion";
      p.box = {1, -1.0, 1.0, 0.0, 1.0, 0.0, 1.0};
      p.residual_mask = kUt | kUxx;
      p.bcs.push_back({Face::XLo, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::XHi, BcKind::Dirichlet, zero3, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) { return std::sin(kPi * x); }});
      p.closed_form = true;
      p.harmonic_kx = 2.0;  // homogeneous Dirichlet on [-1,1]
      break;
    }
    case ProblemId::Heat2D: {
      p.name = "heat2d";
      p.box = {2, 0.0, 1.0, 0.0, 1.0, 0.0, 5.0};
      p.kx = 1.0 / ((500.0 * kPi) * (500.0 * kPi));
      p.ky = 1.0 / (kPi * kPi);
      p.residual_mask = kUt | kUxx | kUyy;
      p.bcs.push_back({Face::XLo, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::XHi, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::YLo, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::YHi, BcKind::Dirichlet, zero3, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double y) {
                         return std::sin(20.0 * kPi * x) * std::sin(kPi * y);
                       }});
      p.closed_form = true;
      p.harmonic_kx = 1.0;
      p.harmonic_ky = 1.0;
      break;
    }
    case ProblemId::Burgers: {
      p.name = "burgers";
      p.box = {1, -1.0, 1.0, 0.0, 1.0, 0.0, 1.0};
      p.nu = 0.01;
      p.residual_mask = kU | kUt | kUx | kUxx;
      p.bcs.push_back({Face::XLo, BcKind::Dirichlet, zero3, 0.0});
      p.bcs.push_back({Face::XHi, BcKind::Dirichlet, zero3, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) { return -std::sin(kPi * x); }});
      p.closed_form = false;
      p.harmonic_kx = 2.0;
      break;
    }
    case ProblemId::AllenCahn: {
      p.name = "allencahn";
      p.box = {1, -1.0, 1.0, 0.0, 1.0, 0.0, 1.0};
      p.nu = 1e-4;
      p.rho = 5.0;
      p.residual_mask = kU | kUt | kUxx;
      p.periodic = true;
      p.bcs.push_back({Face::XLo, BcKind::Periodic, nullptr, 0.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) {
                         return x * x * std::cos(kPi * x);
                       }});
      p.closed_form = false;
      break;
    }
    case ProblemId::NonHomogHeat: {
      p.name = "nhheat";
      p.box = {1, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
      p.residual_mask = kUt | kUxx;
      p.bcs.push_back({Face::XLo, BcKind::Dirichlet,
                       [](double, double, double) { return 1.0; }, 0.0});
      // u_x(1,t) + 4 u(1,t) = g(t)
      p.bcs.push_back({Face::XHi, BcKind::Robin,
                       [](double, double, double t) {
                         const double a = 6.3 * kPi;
                         return 2.0 * kPi * std::cos(kPi * t) +
                                3.78 * kPi * std::cos(a) * std::sin(3.0 * kPi * t) +
                                2.4 * std::sin(a) * std::sin(3.0 * kPi * t) + 6.5;
                       },
                       4.0});
      p.ics.push_back({IcOrder::Value, [](double x, double) {
                         return std::sin(2.0 * kPi * x) + 0.5 * x + 1.0;
                       }});
      p.closed_form = true;
      break;
    }
  }
  return p;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "wave", "reaction", "convection", "diffusion",
      "heat2d", "burgers", "allencahn", "nhheat"};
  return names;
}

PdeProblem make_problem(const std::string& name) {
  static const ProblemId ids[] = {
      ProblemId::Wave,      ProblemId::Reaction,  ProblemId::Convection,
      ProblemId::Diffusion, ProblemId::Heat2D,    ProblemId::Burgers,
      ProblemId::AllenCahn, ProblemId::NonHomogHeat};
  const auto& names = problem_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return make_problem(ids[i]);
  throw ConfigError("unknown problem '" + name + "'");
}

}  // namespace fepinn
