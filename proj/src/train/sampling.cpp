#include "fepinn/train/sampling.hpp"

#include <string>

#include "fepinn/core/rng.hpp"

namespace fepinn {

TrainingSet sample_training_set(const PdeProblem& problem, int n_res, int n_bc, int n_ic,
                                std::uint64_t seed) {
  const DomainBox& box = problem.box;
  TrainingSet set;

  {
    Rng rng(derive_seed(seed, "interior"));
    set.interior.resize(static_cast<size_t>(n_res));
    for (auto& p : set.interior) {
      p.x = rng.uniform(box.x_lo, box.x_hi);
      if (box.space_dim == 2) p.y = rng.uniform(box.y_lo, box.y_hi);
      p.t = rng.uniform(box.t_lo, box.t_hi);
    }
  }

  for (size_t b = 0; b < problem.bcs.size(); ++b) {
    const BcSpec& spec = problem.bcs[b];
    Rng rng(derive_seed(seed, "bc-" + std::to_string(b)));
    for (int i = 0; i < n_bc; ++i) {
      BcConstraint c;
      c.kind = spec.kind;
      c.robin_h = spec.robin_h;
      switch (spec.face) {
        case Face::XLo:
        case Face::XHi:
          c.x = spec.face == Face::XLo ? box.x_lo : box.x_hi;
          if (box.space_dim == 2) c.y = rng.uniform(box.y_lo, box.y_hi);
          break;
        case Face::YLo:
        case Face::YHi:
          c.x = rng.uniform(box.x_lo, box.x_hi);
          c.y = spec.face == Face::YLo ? box.y_lo : box.y_hi;
          break;
      }
      c.t = rng.uniform(box.t_lo, box.t_hi);
      if (spec.kind == BcKind::Periodic) {
        c.x2 = box.x_hi;  // pairs the x-faces; y (if any) is shared
        c.y2 = c.y;
      } else {
        c.g = spec.g ? spec.g(c.x, c.y, c.t) : 0.0;
      }
      set.bc.push_back(c);
    }
  }

  {
    Rng rng(derive_seed(seed, "ic"));
    for (int i = 0; i < n_ic; ++i) {
      const double x = rng.uniform(box.x_lo, box.x_hi);
      const double y = box.space_dim == 2 ? rng.uniform(box.y_lo, box.y_hi) : 0.0;
      for (const IcSpec& ic : problem.ics)
        set.ic.push_back({ic.order, x, y, ic.u0(x, y)});
    }
  }
  return set;
}

namespace {
std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}
}  // namespace

EvalGrid make_eval_grid(const PdeProblem& problem) {
  const DomainBox& box = problem.box;
  EvalGrid g;
  g.space_dim = box.space_dim;
  if (box.space_dim == 1) {
    g.xs = linspace(box.x_lo, box.x_hi, 101);
    g.ts = linspace(box.t_lo, box.t_hi, 101);
  } else {
    g.xs = linspace(box.x_lo, box.x_hi, 64);
    g.ys = linspace(box.y_lo, box.y_hi, 64);
    g.ts = linspace(box.t_lo, box.t_hi, 11);
  }
  return g;
}

}  // namespace fepinn
