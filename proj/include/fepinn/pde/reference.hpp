#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fepinn/pde/problem.hpp"

namespace fepinn {

/// Uniform space-time grid of reference values for one-dimensional problems
/// whose solution is only available numerically. Row-major in time:
/// values[it * nx + ix]. Interpolation is bilinear and exact at the nodes.
struct OracleGrid {
  std::string method;   ///< "cole-hopf" or "spectral"
  std::string problem;  ///< problem config name
  int nx = 0, nt = 0;
  double x_lo = 0.0, x_hi = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  std::vector<double> values;

  double at(int ix, int it) const { return values[static_cast<size_t>(it) * nx + ix]; }
  double interp(double x, double t) const;

  void save(const std::string& path) const;
  static OracleGrid load(const std::string& path);
};

/// Analytic solution value; throws if the problem has no closed form.
double closed_form_value(ProblemId id, double x, double y, double t);

/// Reference solution: either a closed form or a loaded oracle grid.
class ReferenceSolution {
public:
  ReferenceSolution() = default;

  static ReferenceSolution analytic(ProblemId id);
  static ReferenceSolution from_grid(OracleGrid grid);

  bool available() const { return analytic_ || grid_ != nullptr; }
  bool is_analytic() const { return analytic_; }
  const OracleGrid* grid() const { return grid_.get(); }

  /// Solution value; throws MissingOracle when no reference is attached.
  double eval(double x, double y, double t) const;

private:
  bool analytic_ = false;
  ProblemId id_ = ProblemId::Wave;
  std::shared_ptr<const OracleGrid> grid_;
};

/// Builds the reference for a problem: analytic when available, otherwise the
/// oracle grid at `oracle_path` (throws MissingOracle when absent/unreadable).
ReferenceSolution make_reference(const PdeProblem& problem, const std::string& oracle_path);

}  // namespace fepinn
