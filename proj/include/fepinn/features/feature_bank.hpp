#pragma once

#include <cstdint>
#include <vector>

#include "fepinn/features/domain_features.hpp"
#include "fepinn/pde/problem.hpp"

namespace fepinn {

/// Adaptive Fourier feature bank: N sets of trainable frequency tuples, each
/// expanded into every sign combination of sin/cos products across the input
/// axes (4 features per set in 1D, 8 in 2D), each scaled by a trainable
/// amplitude. Optional fixed domain features are appended, and the full
/// vector is centered-L2 normalized per point before entering the head.
///
/// The struct stores the *initial* parameter values; during training the
/// frequencies and amplitudes live in the flat parameter vector.
struct FeatureBank {
  int n_sets = 16;
  int space_dim = 1;
  std::vector<double> omega_x;   // per-set spatial frequency, size n_sets
  std::vector<double> omega_y;   // second spatial axis (2D only)
  std::vector<double> lambda_t;  // per-set temporal frequency
  std::vector<double> coeff;     // amplitudes, set-major, size n_combos()*n_sets
  std::vector<DomainFeatureId> dkf;
  bool normalize = true;
  double eps = 1e-3;

  /// Sign combinations per set: index j has bit 0 = x-factor is sin,
  /// bit 1 = (2D: y-factor, 1D: t-factor) is sin, bit 2 = t-factor (2D).
  int n_combos() const { return 1 << (space_dim + 1); }
  int fourier_width() const { return n_combos() * n_sets; }
  int width() const { return fourier_width() + static_cast<int>(dkf.size()); }
  int n_freq_axes() const { return space_dim + 1; }
};

/// Bank with harmonic initialization: frequency set ℓ (1-based) gets
/// ω = λ = ℓπ/k along every axis, with k the domain length when the problem
/// has homogeneous Dirichlet boundaries and 1 otherwise. Amplitudes start
/// at exactly 1.
FeatureBank make_feature_bank(const PdeProblem& problem, int n_sets, bool normalize,
                              bool use_dkf);

/// Value-level Fourier block (length n_combos()*n_sets, set-major).
std::vector<double> fourier_features(const FeatureBank& bank, double x, double y, double t);

/// Centered L2 normalization: (v - mean(v)) / (||v - mean(v)||_2 + eps).
std::vector<double> normalize(const std::vector<double>& v, double eps = 1e-3);

}  // namespace fepinn
