#pragma once

#include <vector>

#include "fepinn/features/feature_bank.hpp"
#include "fepinn/pde/problem.hpp"

namespace fepinn {

/// Conditioning report for the Gram matrix G = mean over a grid of φφᵀ,
/// where φ is the raw Fourier cross-feature block (coefficients applied,
/// no domain features, no normalization) — the linear-model view u = wᵀφ.
struct GramReport {
  int width = 0;            ///< feature count
  int points_per_axis = 0;
  long n_points = 0;
  std::vector<double> eigenvalues;  ///< ascending
  double eig_min = 0.0;
  double eig_max = 0.0;
  double cond = 0.0;          ///< eig_max / eig_min; +inf when singular
  double cond_scaled = 0.0;   ///< condition number after unit-diagonal scaling
  double nonzero_ratio = 0.0; ///< max/min over eigenvalues above the rank cutoff
  bool singular = false;
};

/// Assembles the Gram matrix of `bank`'s Fourier features over a uniform grid
/// spanning one full period of each axis' fundamental frequency (endpoint
/// excluded; the domain extent is used for near-zero frequencies) and reports
/// its spectrum. `points_per_axis` ≤ 0 selects max(4·n_sets, 32).
GramReport gram_conditioning(const PdeProblem& problem, const FeatureBank& bank,
                             int points_per_axis = 0);

}  // namespace fepinn
