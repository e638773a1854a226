#include "fepinn/train/optim.hpp"

#include <cmath>
#include <limits>

namespace fepinn {
namespace {

bool all_finite(double f, const std::vector<double>& g) {
  if (!std::isfinite(f)) return false;
  for (double x : g)
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

/// φ(α) = f(x + α d); also returns φ'(α) = g(x + α d)·d.
double eval_phi(const Objective& fn, const std::vector<double>& x,
                const std::vector<double>& d, double a, std::vector<double>& x_trial,
                std::vector<double>& g_out, double& dphi) {
  x_trial.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) x_trial[i] = x[i] + a * d[i];
  const double f = fn(x_trial, g_out);
  dphi = dot(g_out, d);
  return f;
}

/// Minimizer of the cubic interpolant through (a0,f0,g0), (a1,f1,g1);
/// NaN when the interpolant has no interior minimizer or inputs are bad.
double cubic_min(double a0, double f0, double g0, double a1, double f1, double g1) {
  const double d1 = g0 + g1 - 3.0 * (f0 - f1) / (a0 - a1);
  const double disc = d1 * d1 - g0 * g1;
  if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::sqrt(disc) * (a1 > a0 ? 1.0 : -1.0);
  const double denom = g1 - g0 + 2.0 * d2;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return a1 - (a1 - a0) * (g1 + d2 - d1) / denom;
}

}  // namespace

double Adam::current_lr() const {
  return opt_.lr * std::pow(opt_.decay, t_ / opt_.decay_every);
}

void Adam::step(std::vector<double>& x, const std::vector<double>& g) {
  const double lr = current_lr();
  ++t_;
  const double b1c = 1.0 - std::pow(opt_.beta1, t_);
  const double b2c = 1.0 - std::pow(opt_.beta2, t_);
  for (size_t i = 0; i < x.size(); ++i) {
    m_[i] = opt_.beta1 * m_[i] + (1.0 - opt_.beta1) * g[i];
    v_[i] = opt_.beta2 * v_[i] + (1.0 - opt_.beta2) * g[i] * g[i];
    x[i] -= lr * (m_[i] / b1c) / (std::sqrt(v_[i] / b2c) + opt_.eps);
  }
}

void Lbfgs::direction(const std::vector<double>& g, std::vector<double>& d) const {
  d = g;
  const int m = static_cast<int>(s_.size());
  if (m == 0) {
    for (double& v : d) v = -v;
    return;
  }
  std::vector<double> alpha(m);
  for (int i = m - 1; i >= 0; --i) {
    alpha[i] = rho_[i] * dot(s_[i], d);
    for (int k = 0; k < n_; ++k) d[k] -= alpha[i] * y_[i][k];
  }
  const double gamma = dot(s_[m - 1], y_[m - 1]) / dot(y_[m - 1], y_[m - 1]);
  for (double& v : d) v *= gamma;
  for (int i = 0; i < m; ++i) {
    const double beta = rho_[i] * dot(y_[i], d);
    for (int k = 0; k < n_; ++k) d[k] += (alpha[i] - beta) * s_[i][k];
  }
  for (double& v : d) v = -v;
}

bool Lbfgs::zoom(const Objective& fn, const std::vector<double>& x,
                 const std::vector<double>& d, double f0, double dphi0, double a_lo,
                 double f_lo, double d_lo, double a_hi, double f_hi, double d_hi,
                 int evals_used, double& alpha, double& f_out, std::vector<double>& g_out,
                 std::vector<double>& x_trial) const {
  for (int evals = evals_used; evals < opt_.max_evals; ++evals) {
    const double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
    const double width = hi - lo;
    if (!(width > 1e-16 * std::max(1.0, hi))) return false;
    double aj = cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
    const double safe_lo = lo + 0.1 * width, safe_hi = hi - 0.1 * width;
    if (!std::isfinite(aj) || aj < safe_lo || aj > safe_hi) aj = 0.5 * (lo + hi);
    double dphi;
    const double phi = eval_phi(fn, x, d, aj, x_trial, g_out, dphi);
    if (!std::isfinite(phi) || !std::isfinite(dphi) ||
        phi > f0 + opt_.c1 * aj * dphi0 || phi >= f_lo) {
      a_hi = aj;
      f_hi = phi;
      d_hi = dphi;
    } else {
      if (std::abs(dphi) <= -opt_.c2 * dphi0) {
        alpha = aj;
        f_out = phi;
        return true;
      }
      if (dphi * (a_hi - a_lo) >= 0.0) {
        a_hi = a_lo;
        f_hi = f_lo;
        d_hi = d_lo;
      }
      a_lo = aj;
      f_lo = phi;
      d_lo = dphi;
    }
  }
  return false;
}

bool Lbfgs::line_search(const Objective& fn, const std::vector<double>& x,
                        const std::vector<double>& d, double f0, double dphi0,
                        double alpha0, double& alpha, double& f_out,
                        std::vector<double>& g_out, std::vector<double>& x_trial) const {
  double a_prev = 0.0, f_prev = f0, d_prev = dphi0;
  double a = alpha0;
  for (int evals = 1; evals <= opt_.max_evals; ++evals) {
    double dphi;
    const double phi = eval_phi(fn, x, d, a, x_trial, g_out, dphi);
    if (!std::isfinite(phi) || !std::isfinite(dphi) ||
        phi > f0 + opt_.c1 * a * dphi0 || (evals > 1 && phi >= f_prev))
      return zoom(fn, x, d, f0, dphi0, a_prev, f_prev, d_prev, a, phi, dphi, evals, alpha,
                  f_out, g_out, x_trial);
    if (std::abs(dphi) <= -opt_.c2 * dphi0) {
      alpha = a;
      f_out = phi;
      return true;
    }
    if (dphi >= 0.0)
      return zoom(fn, x, d, f0, dphi0, a, phi, dphi, a_prev, f_prev, d_prev, evals, alpha,
                  f_out, g_out, x_trial);
    a_prev = a;
    f_prev = phi;
    d_prev = dphi;
    a = std::min(2.0 * a, 1e10);
  }
  return false;
}

LbfgsStatus Lbfgs::step(const Objective& fn, std::vector<double>& x, double& f,
                        std::vector<double>& g) {
  if (!all_finite(f, g)) return LbfgsStatus::Diverged;
  if (norm_inf(g) <= opt_.grad_tol) return LbfgsStatus::Converged;

  std::vector<double> d(n_), x_new, g_new;
  for (int attempt = 0; attempt < 2; ++attempt) {
    direction(g, d);
    const double dphi0 = dot(g, d);
    if (dphi0 >= 0.0) {
      if (attempt == 0 && !s_.empty()) {
        clear_memory();
        continue;
      }
      return LbfgsStatus::LineSearchFailed;
    }
    const double alpha0 = s_.empty() ? std::min(1.0, 1.0 / std::max(norm2(g), 1e-300)) : 1.0;
    double alpha = 0.0, f_new = 0.0;
    if (!line_search(fn, x, d, f, dphi0, alpha0, alpha, f_new, g_new, x_new)) {
      if (attempt == 0 && !s_.empty()) {
        clear_memory();
        continue;
      }
      return LbfgsStatus::LineSearchFailed;
    }
    if (!all_finite(f_new, g_new)) return LbfgsStatus::Diverged;

    std::vector<double> s(n_), y(n_);
    for (int k = 0; k < n_; ++k) {
      s[k] = x_new[k] - x[k];
      y[k] = g_new[k] - g[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-10 * norm2(s) * norm2(y)) {
      s_.push_back(std::move(s));
      y_.push_back(std::move(y));
      rho_.push_back(1.0 / sy);
      if (static_cast<int>(s_.size()) > opt_.memory) {
        s_.erase(s_.begin());
        y_.erase(y_.begin());
        rho_.erase(rho_.begin());
      }
    }
    x = std::move(x_new);
    f = f_new;
    g = std::move(g_new);
    first_step_ = false;
    return LbfgsStatus::Ok;
  }
  return LbfgsStatus::LineSearchFailed;
}

}  // namespace fepinn
