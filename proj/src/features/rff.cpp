#include "fepinn/features/rff.hpp"

#include <cmath>

#include "fepinn/core/rng.hpp"

namespace fepinn {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

RffMap make_rff_map(int m, int space_dim, std::uint64_t seed) {
  RffMap map;
  map.m = m;
  map.d = space_dim + 1;
  map.axis_scale.assign(static_cast<size_t>(map.d), 200.0);
  map.axis_scale.back() = 10.0;  // time axis
  map.B.resize(static_cast<size_t>(m) * map.d);
  Rng rng(derive_seed(seed, "rff-projection"));
  for (double& b : map.B) b = rng.normal();
  return map;
}

std::vector<double> rff_map(const RffMap& map, double x, double y, double t) {
  const double v[3] = {x, map.d == 3 ? y : t, t};
  std::vector<double> out(static_cast<size_t>(2) * map.m);
  for (int f = 0; f < map.m; ++f) {
    double p = 0.0;
    for (int a = 0; a < map.d; ++a)
      p += map.B[static_cast<size_t>(f) * map.d + a] * map.axis_scale[a] * v[a];
    p *= kTwoPi;
    out[f] = std::cos(p);
    out[static_cast<size_t>(map.m) + f] = std::sin(p);
  }
  return out;
}

}  // namespace fepinn
