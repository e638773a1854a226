#pragma once

#include <cstdint>
#include <vector>

namespace fepinn {

/// Random Fourier feature map: a frozen Gaussian projection matrix B (m rows,
/// one per feature pair) applied to per-axis-scaled coordinates, expanded as
/// [cos(2π·Bṽ); sin(2π·Bṽ)]. B is sampled once at construction and never
/// receives gradients.
struct RffMap {
  int m = 64;                      // projection rows; output width is 2m
  int d = 2;                       // input dimension (space_dim + 1)
  std::vector<double> B;           // m x d, row-major, standard normal draws
  std::vector<double> axis_scale;  // per-axis sigma: spatial 200, temporal 10

  int width() const { return 2 * m; }
};

RffMap make_rff_map(int m, int space_dim, std::uint64_t seed);

/// Value-level map; output length 2m.
std::vector<double> rff_map(const RffMap& map, double x, double y, double t);

}  // namespace fepinn
