#pragma once

#include <cstdint>
#include <vector>

namespace fepinn {

/// Normalized Gaussian radial-basis expansion: fixed centers, trainable
/// per-center weights, output Φ(v) = Σ w_i k(v,c_i) / Σ_j k(v,c_j) with
/// k(v,c) = exp(-||v-c||² / (2σ²)). The normalization is a partition of
/// unity, so the denominator is strictly positive everywhere.
///
/// With poly_order = 2 the map additionally exposes the monomial block
/// [1, x, t, x², xt, t²] (extended analogously for two spatial dimensions)
/// whose trainable weights form a linear tail added to Φ.
struct RbfMap {
  int m = 128;                  // number of centers
  int d = 2;                    // input dimension (space_dim + 1)
  std::vector<double> centers;  // m x d, row-major, standard normal draws
  double sigma = 1.0;
  int poly_order = 0;  // 0: plain kernel sum; 2: append degree-2 monomials
  std::vector<double> weights;       // initial kernel weights (all 1)
  std::vector<double> poly_weights;  // initial monomial weights (all 1)

  int n_poly() const;
};

RbfMap make_rbf_map(int m, int space_dim, int poly_order, std::uint64_t seed);

/// Number of monomials of total degree <= order in d variables (order <= 2).
int n_monomials(int d, int order);

/// Monomial values in graded order: d=2 -> [1, x, t, x², xt, t²];
/// d=3 -> [1, x, y, t, x², xy, xt, y², yt, t²].
std::vector<double> monomial_block(int d, int order, double x, double y, double t);

/// Value-level map: [Φ] for plain RBF, [Φ, monomials...] with a polynomial
/// block. Weight vectors are read from the map's stored (initial) values.
std::vector<double> rbf_map(const RbfMap& map, double x, double y, double t);

}  // namespace fepinn
