#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fepinn/ad/engine.hpp"
#include "fepinn/core/errors.hpp"
#include "fepinn/train/sampling.hpp"

namespace fepinn {

/// Term weights of the collocation loss
///   L = w_res/(2 n_res) Σ (a_i r_i)²
///     + w_bc /(2 n_bc ) Σ e_b²
///     + w_ic /(2 n_ic ) Σ e_k².
struct LossWeights {
  double res = 1.0;
  double bc = 100.0;
  double ic = 100.0;
};

template <class T>
struct LossPartsT {
  T total{}, res{}, bc{}, ic{};
};
using LossParts = LossPartsT<double>;

/// Execution strategy for the point loops. Both modes accumulate in the same
/// canonical block order (blocks of 256 points, block partials combined
/// sequentially), so their results are bitwise identical; Parallel only
/// distributes independent blocks across OpenMP threads.
enum class ExecMode { Serial, Parallel };

template <class T, class A>
inline Jet<T, A> seed_jet(const BundleT<T>& partials, const T& s) {
  Jet<T, A> ub;
  ub.c[0] = s * partials.u;
  for (Deriv d : {Deriv::Ux, Deriv::Uy, Deriv::Ut, Deriv::Uxx, Deriv::Uyy, Deriv::Utt}) {
    const int c = A::comp(d);
    if (c >= 0) ub.c[c] = s * partials.by(d);
  }
  return ub;
}

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Full-batch collocation loss over a fixed training set: value, exact
/// parameter gradient, exact Hessian-vector products (via Dual scalars), raw
/// residuals, and the balancing diagnostics (residual-weight recursion and
/// kernel-trace reweighting) that the adaptive baselines need.
class LossEvaluator {
 public:
  LossEvaluator(const PdeProblem& problem, const ModelSpec& spec, const TrainingSet& set,
                LossWeights weights = {}, ExecMode mode = ExecMode::Parallel)
      : problem_(problem),
        spec_(spec),
        set_(set),
        weights_(weights),
        mode_(mode),
        n_params_(make_layout(spec).total) {
    unsigned need = problem.residual_mask | kU;
    for (const auto& b : set.bc)
      if (b.kind == BcKind::Robin) need |= kUx;
    for (const auto& c : set.ic)
      if (c.order == IcOrder::TimeDeriv) need |= kUt;
    need_mask_ = need;
  }

  int n_params() const { return n_params_; }
  const LossWeights& weights() const { return weights_; }
  void set_weights(const LossWeights& w) { weights_ = w; }
  ExecMode mode() const { return mode_; }
  void set_mode(ExecMode m) { mode_ = m; }

  LossParts loss(const std::vector<double>& params) {
    return dispatch<double>(params.data(), nullptr);
  }

  LossParts loss_grad(const std::vector<double>& params, std::vector<double>& grad) {
    grad.assign(static_cast<size_t>(n_params_), 0.0);
    return dispatch<double>(params.data(), grad.data());
  }

  LossPartsT<Dual> loss_grad_dual(const std::vector<Dual>& params, std::vector<Dual>& grad) {
    grad.assign(static_cast<size_t>(n_params_), Dual(0.0));
    return dispatch<Dual>(params.data(), grad.data());
  }

  /// Exact Hessian-vector product of the total loss at `params`.
  void hvp(const std::vector<double>& params, const std::vector<double>& v,
           std::vector<double>& out) {
    std::vector<Dual> pd(params.size());
    for (size_t i = 0; i < params.size(); ++i) pd[i] = Dual(params[i], v[i]);
    std::vector<Dual> gd;
    loss_grad_dual(pd, gd);
    out.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i) out[i] = gd[i].d;
  }

  /// Raw PDE residuals at the interior points.
  void residuals(const std::vector<double>& params, std::vector<double>& out) {
    out.resize(set_.interior.size());
    if (problem_.box.space_dim == 2)
      residuals_impl<Axes2D>(params.data(), out.data());
    else
      residuals_impl<Axes1D>(params.data(), out.data());
  }

  // -- Residual-based attention ---------------------------------------------

  /// Enables per-residual-point weights a_i (started at zero).
  void enable_rba(double gamma = 0.999, double eta = 0.01, double cap = 10.0) {
    rba_gamma_ = gamma;
    rba_eta_ = eta;
    rba_cap_ = cap;
    rba_.assign(set_.interior.size(), 0.0);
  }
  const std::vector<double>& rba_weights() const { return rba_; }

  /// One weight recursion step: a ← min(cap, γ a + η |r| / max|r|).
  void rba_update(const std::vector<double>& params) {
    residuals(params, rba_scratch_);
    double rmax = 0.0;
    for (double r : rba_scratch_) rmax = std::max(rmax, std::abs(r));
    for (size_t i = 0; i < rba_.size(); ++i) {
      double a = rba_gamma_ * rba_[i];
      if (rmax > 1e-300) a += rba_eta_ * std::abs(rba_scratch_[i]) / rmax;
      rba_[i] = std::min(rba_cap_, a);
    }
  }

  // -- Kernel-trace balancing ------------------------------------------------

  /// Diagonal traces of the tangent kernel, split into the residual block and
  /// the data block (boundary + initial constraints).
  std::pair<double, double> ntk_traces(const std::vector<double>& params) {
    if (problem_.box.space_dim == 2) return traces_impl<Axes2D>(params.data());
    return traces_impl<Axes1D>(params.data());
  }

  /// Sets w_res = Tr(K)/Tr(K_rr) and w_bc = w_ic = Tr(K)/Tr(K_uu).
  void apply_ntk_weights(const std::vector<double>& params) {
    auto [tr_rr, tr_uu] = ntk_traces(params);
    if (tr_rr < 1e-12 || tr_uu < 1e-12)
      throw ZeroTraceError("tangent-kernel trace vanished; cannot balance loss weights");
    const double tr = tr_rr + tr_uu;
    weights_.res = tr / tr_rr;
    weights_.bc = weights_.ic = tr / tr_uu;
  }

 private:
  static constexpr int kBlock = 256;

  static int n_blocks(size_t n) { return static_cast<int>((n + kBlock - 1) / kBlock); }

  template <class T>
  LossPartsT<T> dispatch(const T* params, T* grad) {
    if (problem_.box.space_dim == 2) return loss_impl<T, Axes2D>(params, grad);
    return loss_impl<T, Axes1D>(params, grad);
  }

  template <class T, class A>
  LossPartsT<T> loss_impl(const T* params, T* grad) {
    require_derivs<A>(need_mask_);
    const int P = n_params_;
    const int nb_res = n_blocks(set_.interior.size());
    const int nb_bc = n_blocks(set_.bc.size());
    const int nb_ic = n_blocks(set_.ic.size());
    const int nb = nb_res + nb_bc + nb_ic;
    std::vector<T> part(static_cast<size_t>(nb), T(0.0));
    std::vector<T> gpart;
    if (grad) gpart.assign(static_cast<size_t>(nb) * P, T(0.0));

    const double scale_res = weights_.res / std::max<size_t>(1, set_.interior.size());
    const double scale_bc = weights_.bc / std::max<size_t>(1, set_.bc.size());
    const double scale_ic = weights_.ic / std::max<size_t>(1, set_.ic.size());

    auto process = [&](int b) {
      PointKernel<T, A> kernel(spec_);
      T sum(0.0);
      T* gp = grad ? gpart.data() + static_cast<size_t>(b) * P : nullptr;
      if (b < nb_res) {
        const size_t lo = static_cast<size_t>(b) * kBlock;
        const size_t hi = std::min(set_.interior.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const ResidualPoint& pt = set_.interior[i];
          const BundleT<T> bun = to_bundle(kernel.forward(params, pt.x, pt.y, pt.t));
          const T r = pde_residual(problem_, bun, pt.x, pt.y, pt.t);
          const double a = rba_.empty() ? 1.0 : rba_[i];
          sum += (a * a) * (r * r);
          if (gp) {
            const BundleT<T> pr = pde_residual_partials(problem_, bun);
            const T s = (scale_res * a * a) * r;
            kernel.backward(seed_jet<T, A>(pr, s), params, gp);
          }
        }
      } else if (b < nb_res + nb_bc) {
        PointKernel<T, A> partner(spec_);  // second point of periodic pairs
        const size_t lo = static_cast<size_t>(b - nb_res) * kBlock;
        const size_t hi = std::min(set_.bc.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const BcConstraint& c = set_.bc[i];
          const Jet<T, A>& u = kernel.forward(params, c.x, c.y, c.t);
          T e;
          if (c.kind == BcKind::Periodic) {
            const Jet<T, A>& u2 = partner.forward(params, c.x2, c.y2, c.t);
            e = u.c[0] - u2.c[0];
            sum += e * e;
            if (gp) {
              const T s = scale_bc * e;
              Jet<T, A> ub;
              ub.c[0] = s;
              kernel.backward(ub, params, gp);
              ub.c[0] = -s;
              partner.backward(ub, params, gp);
            }
          } else if (c.kind == BcKind::Robin) {
            const int cux = A::comp(Deriv::Ux);
            e = u.c[cux] + c.robin_h * u.c[0] - c.g;
            sum += e * e;
            if (gp) {
              const T s = scale_bc * e;
              Jet<T, A> ub;
              ub.c[0] = c.robin_h * s;
              ub.c[cux] = s;
              kernel.backward(ub, params, gp);
            }
          } else {
            e = u.c[0] - c.g;
            sum += e * e;
            if (gp) {
              Jet<T, A> ub;
              ub.c[0] = scale_bc * e;
              kernel.backward(ub, params, gp);
            }
          }
        }
      } else {
        const size_t lo = static_cast<size_t>(b - nb_res - nb_bc) * kBlock;
        const size_t hi = std::min(set_.ic.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const IcConstraint& c = set_.ic[i];
          const Jet<T, A>& u = kernel.forward(params, c.x, c.y, problem_.box.t_lo);
          const int comp = c.order == IcOrder::Value ? 0 : A::comp(Deriv::Ut);
          const T e = u.c[comp] - c.target;
          sum += e * e;
          if (gp) {
            Jet<T, A> ub;
            ub.c[comp] = scale_ic * e;
            kernel.backward(ub, params, gp);
          }
        }
      }
      part[b] = sum;
    };

    run_blocks(nb, process);

    LossPartsT<T> out;
    for (int b = 0; b < nb_res; ++b) out.res += part[b];
    for (int b = nb_res; b < nb_res + nb_bc; ++b) out.bc += part[b];
    for (int b = nb_res + nb_bc; b < nb; ++b) out.ic += part[b];
    out.res = (0.5 * scale_res) * out.res;
    out.bc = (0.5 * scale_bc) * out.bc;
    out.ic = (0.5 * scale_ic) * out.ic;
    out.total = out.res + out.bc + out.ic;
    if (grad)
      for (int b = 0; b < nb; ++b) {
        const T* gp = gpart.data() + static_cast<size_t>(b) * P;
        for (int k = 0; k < P; ++k) grad[k] += gp[k];
      }
    return out;
  }

  template <class A>
  void residuals_impl(const double* params, double* out) {
    require_derivs<A>(problem_.residual_mask);
    const int nb = n_blocks(set_.interior.size());
    auto process = [&](int b) {
      PointKernel<double, A> kernel(spec_);
      const size_t lo = static_cast<size_t>(b) * kBlock;
      const size_t hi = std::min(set_.interior.size(), lo + kBlock);
      for (size_t i = lo; i < hi; ++i) {
        const ResidualPoint& pt = set_.interior[i];
        const Bundle bun = to_bundle(kernel.forward(params, pt.x, pt.y, pt.t));
        out[i] = pde_residual(problem_, bun, pt.x, pt.y, pt.t);
      }
    };
    run_blocks(nb, process);
  }

  template <class A>
  std::pair<double, double> traces_impl(const double* params) {
    require_derivs<A>(need_mask_);
    const int P = n_params_;
    const int nb_res = n_blocks(set_.interior.size());
    const int nb_bc = n_blocks(set_.bc.size());
    const int nb_ic = n_blocks(set_.ic.size());
    const int nb = nb_res + nb_bc + nb_ic;
    std::vector<double> part(static_cast<size_t>(nb), 0.0);

    auto process = [&](int b) {
      PointKernel<double, A> kernel(spec_);
      std::vector<double> g(static_cast<size_t>(P));
      double tr = 0.0;
      auto flush = [&]() {
        double s = 0.0;
        for (double x : g) s += x * x;
        tr += s;
      };
      if (b < nb_res) {
        const size_t lo = static_cast<size_t>(b) * kBlock;
        const size_t hi = std::min(set_.interior.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const ResidualPoint& pt = set_.interior[i];
          std::fill(g.begin(), g.end(), 0.0);
          const Bundle bun = to_bundle(kernel.forward(params, pt.x, pt.y, pt.t));
          const Bundle pr = pde_residual_partials(problem_, bun);
          kernel.backward(seed_jet<double, A>(pr, 1.0), params, g.data());
          flush();
        }
      } else if (b < nb_res + nb_bc) {
        PointKernel<double, A> partner(spec_);
        const size_t lo = static_cast<size_t>(b - nb_res) * kBlock;
        const size_t hi = std::min(set_.bc.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const BcConstraint& c = set_.bc[i];
          std::fill(g.begin(), g.end(), 0.0);
          kernel.forward(params, c.x, c.y, c.t);
          Jet<double, A> ub;
          if (c.kind == BcKind::Periodic) {
            partner.forward(params, c.x2, c.y2, c.t);
            ub.c[0] = 1.0;
            kernel.backward(ub, params, g.data());
            ub.c[0] = -1.0;
            partner.backward(ub, params, g.data());
          } else if (c.kind == BcKind::Robin) {
            ub.c[0] = c.robin_h;
            ub.c[A::comp(Deriv::Ux)] = 1.0;
            kernel.backward(ub, params, g.data());
          } else {
            ub.c[0] = 1.0;
            kernel.backward(ub, params, g.data());
          }
          flush();
        }
      } else {
        const size_t lo = static_cast<size_t>(b - nb_res - nb_bc) * kBlock;
        const size_t hi = std::min(set_.ic.size(), lo + kBlock);
        for (size_t i = lo; i < hi; ++i) {
          const IcConstraint& c = set_.ic[i];
          std::fill(g.begin(), g.end(), 0.0);
          kernel.forward(params, c.x, c.y, problem_.box.t_lo);
          Jet<double, A> ub;
          ub.c[c.order == IcOrder::Value ? 0 : A::comp(Deriv::Ut)] = 1.0;
          kernel.backward(ub, params, g.data());
          flush();
        }
      }
      part[b] = tr;
    };
    run_blocks(nb, process);

    double tr_rr = 0.0, tr_uu = 0.0;
    for (int b = 0; b < nb_res; ++b) tr_rr += part[b];
    for (int b = nb_res; b < nb; ++b) tr_uu += part[b];
    return {tr_rr, tr_uu};
  }

  template <class Fn>
  void run_blocks(int nb, Fn&& fn) const {
    if (mode_ == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (int b = 0; b < nb; ++b) fn(b);
    } else {
      for (int b = 0; b < nb; ++b) fn(b);
    }
  }

  const PdeProblem& problem_;
  const ModelSpec& spec_;
  const TrainingSet& set_;
  LossWeights weights_;
  ExecMode mode_;
  int n_params_ = 0;
  unsigned need_mask_ = 0;

  std::vector<double> rba_;
  std::vector<double> rba_scratch_;
  double rba_gamma_ = 0.999, rba_eta_ = 0.01, rba_cap_ = 10.0;
};

}  // namespace fepinn
