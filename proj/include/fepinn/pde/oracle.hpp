#pragma once

#include "fepinn/pde/reference.hpp"

namespace fepinn {

struct OracleBuildOptions {
  int nx_out = 257;  ///< output spatial nodes (inclusive endpoints)
  int nt_out = 101;  ///< output time slices (inclusive endpoints)

  int burgers_panels = 1024;  ///< quadrature panels at the fine resolution
  int ac_modes = 2048;        ///< Fourier modes at the fine resolution
  double ac_dt = 1e-4;        ///< IMEX step size

  /// Rebuild at half resolution and require max-abs agreement below tol.
  bool check_convergence = true;
  double convergence_tol = 1e-6;
};

/// Numerical reference for problems without a closed form (Burgers via the
/// Cole-Hopf transform, Allen-Cahn via a Fourier pseudo-spectral
/// method-of-lines). Throws OracleConvergenceFailure if the two-resolution
/// self check fails and ConfigError for problems that need no oracle.
OracleGrid build_oracle(const PdeProblem& problem, const OracleBuildOptions& opt = {});

/// Pointwise Cole-Hopf evaluation of the Burgers benchmark solution
/// (nu = 0.01, initial condition -sin(pi x)); exposed for tests.
double burgers_cole_hopf_value(double x, double t, int panels);

}  // namespace fepinn
