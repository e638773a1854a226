#pragma once

#include <functional>
#include <vector>

namespace fepinn {

/// Evaluates f(x) and writes ∇f into `grad` (resized by the callee's caller).
using Objective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int decay_every = 2000;  ///< step-decay interval, in iterations
  double decay = 0.9;      ///< lr multiplier applied every `decay_every`
};

/// Adam with stepwise learning-rate decay. State (moments and the iteration
/// counter that drives both bias correction and the decay) is reset whenever a
/// new phase begins.
class Adam {
 public:
  Adam(int n, AdamOptions opt = {}) : opt_(opt), m_(n, 0.0), v_(n, 0.0) {}

  void reset() {
    t_ = 0;
    std::fill(m_.begin(), m_.end(), 0.0);
    std::fill(v_.begin(), v_.end(), 0.0);
  }

  double current_lr() const;
  void step(std::vector<double>& x, const std::vector<double>& g);

 private:
  AdamOptions opt_;
  int t_ = 0;  ///< completed steps
  std::vector<double> m_, v_;
};

struct LbfgsOptions {
  int memory = 50;
  double c1 = 1e-4;  ///< sufficient-decrease constant
  double c2 = 0.9;   ///< curvature constant
  int max_evals = 25;
  double grad_tol = 1e-10;  ///< ‖g‖∞ convergence threshold
};

enum class LbfgsStatus {
  Ok,           ///< step taken
  Converged,    ///< gradient below tolerance
  LineSearchFailed,  ///< no Wolfe point found even after a memory reset
  Diverged,     ///< accepted iterate has non-finite value or gradient
};

/// Limited-memory BFGS with a strong-Wolfe line search (bracket + zoom with
/// safeguarded cubic interpolation). The caller owns the iterate and its
/// current value/gradient; step() advances them by one accepted line search.
class Lbfgs {
 public:
  Lbfgs(int n, LbfgsOptions opt = {}) : opt_(opt), n_(n) {}

  void clear_memory() {
    s_.clear();
    y_.clear();
    rho_.clear();
    first_step_ = true;
  }

  int memory_size() const { return static_cast<int>(s_.size()); }

  LbfgsStatus step(const Objective& fn, std::vector<double>& x, double& f,
                   std::vector<double>& g);

 private:
  void direction(const std::vector<double>& g, std::vector<double>& d) const;
  bool line_search(const Objective& fn, const std::vector<double>& x,
                   const std::vector<double>& d, double f0, double dphi0, double alpha0,
                   double& alpha, double& f_out, std::vector<double>& g_out,
                   std::vector<double>& x_trial) const;
  bool zoom(const Objective& fn, const std::vector<double>& x, const std::vector<double>& d,
            double f0, double dphi0, double a_lo, double f_lo, double d_lo, double a_hi,
            double f_hi, double d_hi, int evals_used, double& alpha, double& f_out,
            std::vector<double>& g_out, std::vector<double>& x_trial) const;

  LbfgsOptions opt_;
  int n_;
  bool first_step_ = true;
  std::vector<std::vector<double>> s_, y_;
  std::vector<double> rho_;
};

}  // namespace fepinn
