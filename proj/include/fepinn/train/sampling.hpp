#pragma once

#include <cstdint>
#include <vector>

#include "fepinn/pde/problem.hpp"

namespace fepinn {

struct ResidualPoint {
  double x = 0.0, y = 0.0, t = 0.0;
};

/// One boundary constraint instance. Periodic constraints pair the point
/// (x, y, t) on the low face with (x2, y2, t) on the high face and count as a
/// single constraint. Robin means u_x + robin_h * u = g at the point.
struct BcConstraint {
  BcKind kind = BcKind::Dirichlet;
  double x = 0.0, y = 0.0, t = 0.0;
  double x2 = 0.0, y2 = 0.0;
  double g = 0.0;
  double robin_h = 0.0;
};

/// One initial-time constraint: value or time-derivative target at t = t_lo.
struct IcConstraint {
  IcOrder order = IcOrder::Value;
  double x = 0.0, y = 0.0;
  double target = 0.0;
};

struct TrainingSet {
  std::vector<ResidualPoint> interior;
  std::vector<BcConstraint> bc;
  std::vector<IcConstraint> ic;
};

/// Uniform collocation draw. Point counts: n_res interior points; n_bc points
/// per boundary-condition entry (a periodic pair is one entry); n_ic initial
/// points, each emitting one constraint per initial-condition entry on the
/// same locations. Separate derived RNG streams per group keep the draw
/// reproducible and independent of the other groups' sizes.
TrainingSet sample_training_set(const PdeProblem& problem, int n_res, int n_bc, int n_ic,
                                std::uint64_t seed);

/// Fixed tensor evaluation grid: 101x101 (x,t) in one spatial dimension,
/// 64x64x11 (x,y,t) in two. Endpoints included.
struct EvalGrid {
  int space_dim = 1;
  std::vector<double> xs, ys, ts;
  size_t size() const { return xs.size() * (space_dim == 2 ? ys.size() : 1) * ts.size(); }
};

EvalGrid make_eval_grid(const PdeProblem& problem);

}  // namespace fepinn
