#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace fepinn {

/// Symmetric linear operator: out = A v. `out` is pre-sized to v.size().
using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct SlqOptions {
  int n_probes = 100;
  int steps = 200;  ///< Lanczos steps per probe
  std::uint64_t seed = 0;
  double breakdown_tol = 1e-12;  ///< β threshold that truncates the recurrence
};

/// One Ritz node of one probe's Gauss quadrature rule.
struct SlqNode {
  double node = 0.0;
  double weight = 0.0;  ///< squared first eigenvector component; sums to 1 per probe
  int probe = 0;
};

struct SlqResult {
  std::vector<SlqNode> nodes;
  double lambda_max = std::numeric_limits<double>::quiet_NaN();
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  int n_probes = 0;
  double max_weight_sum_err = 0.0;  ///< max over probes of |Σ weights − 1|
};

/// Stochastic Lanczos quadrature estimate of the spectral density of a
/// symmetric operator, using unit-normalized Gaussian probes and fully
/// reorthogonalized Lanczos.
SlqResult slq_spectrum(const LinOp& av, int n, const SlqOptions& opt = {});

/// Gaussian-kernel smoothing of the node/weight cloud onto a uniform grid,
/// with bandwidth `rel_bandwidth` times the spectral range. Intended for
/// plotting; quantitative statements should use the raw nodes.
std::vector<std::pair<double, double>> smoothed_density(const SlqResult& r, int n_grid = 512,
                                                        double rel_bandwidth = 0.01);

/// Dense reference: materializes A column by column and returns its full
/// eigenvalue list (ascending). Only sensible for small n.
std::vector<double> dense_eigenvalues(const LinOp& av, int n);

}  // namespace fepinn
