#include "fepinn/features/rbf.hpp"

#include <cmath>

#include "fepinn/core/errors.hpp"
#include "fepinn/core/rng.hpp"

namespace fepinn {

int n_monomials(int d, int order) {
  if (order == 0) return 0;
  if (order != 2) throw ConfigError("polynomial tail supports total degree 2 only");
  return d == 2 ? 6 : 10;
}

int RbfMap::n_poly() const { return n_monomials(d, poly_order); }

RbfMap make_rbf_map(int m, int space_dim, int poly_order, std::uint64_t seed) {
  RbfMap map;
  map.m = m;
  map.d = space_dim + 1;
  map.poly_order = poly_order;
  map.centers.resize(static_cast<size_t>(m) * map.d);
  Rng rng(derive_seed(seed, "rbf-centers"));
  for (double& c : map.centers) c = rng.normal();
  map.weights.assign(static_cast<size_t>(m), 1.0);
  map.poly_weights.assign(static_cast<size_t>(map.n_poly()), 1.0);
  return map;
}

std::vector<double> monomial_block(int d, int order, double x, double y, double t) {
  if (n_monomials(d, order) == 0) return {};
  if (d == 2) return {1.0, x, t, x * x, x * t, t * t};
  return {1.0, x, y, t, x * x, x * y, x * t, y * y, y * t, t * t};
}

std::vector<double> rbf_map(const RbfMap& map, double x, double y, double t) {
  const double v[3] = {x, map.d == 3 ? y : t, t};
  double num = 0.0, den = 0.0;
  const double inv2s2 = 1.0 / (2.0 * map.sigma * map.sigma);
  for (int i = 0; i < map.m; ++i) {
    double r2 = 0.0;
    for (int a = 0; a < map.d; ++a) {
      const double dca = v[a] - map.centers[static_cast<size_t>(i) * map.d + a];
      r2 += dca * dca;
    }
    const double k = std::exp(-r2 * inv2s2);
    num += map.weights[i] * k;
    den += k;
  }
  std::vector<double> out{num / den};
  for (double p : monomial_block(map.d, map.poly_order, x, y, t)) out.push_back(p);
  return out;
}

}  // namespace fepinn
