#pragma once

#include <string>
#include <vector>

#include "fepinn/ad/jet.hpp"
#include "fepinn/core/errors.hpp"
#include "fepinn/features/domain_features.hpp"
#include "fepinn/model/model.hpp"

namespace fepinn {

/// Throws when the axis layout cannot supply a requested derivative.
template <class A>
inline void require_derivs(unsigned mask) {
  if ((mask & ~A::supported) != 0u)
    throw UnsupportedDerivative("axis layout does not track a requested derivative");
}

/// Coordinate jet with an axis guard (value-only layouts pass axis -1).
template <class T, class A>
inline Jet<T, A> coord_jet(double v, int axis) {
  Jet<T, A> j;
  j.c[0] = T(v);
  if (axis >= 0 && axis < A::n_axis) j.c[A::d1[axis]] = T(1.0);
  return j;
}

/// Jet of cos/sin(w * coordinate) where the frequency w is a trainable
/// parameter (so it carries the scalar type T, not double).
template <class T, class A>
inline Jet<T, A> trig_param_jet(const T& w, double coord, int axis, bool is_sin) {
  using std::cos;
  using std::sin;
  const T a = w * coord;
  const T s = sin(a), c = cos(a);
  Jet<T, A> j;
  j.c[0] = is_sin ? s : c;
  if (axis >= 0 && axis < A::n_axis) {
    j.c[A::d1[axis]] = is_sin ? w * c : -(w * s);
    const int d2 = A::d2[axis];
    if (d2 >= 0) j.c[d2] = -(w * w) * (is_sin ? s : c);
  }
  return j;
}

/// Component-wise derivative of trig_param_jet with respect to w. Needed by
/// the reverse pass: every jet component of a Fourier feature depends on the
/// frequency, so its adjoint contracts against this jet.
template <class T, class A>
inline Jet<T, A> trig_param_jet_dfreq(const T& w, double coord, int axis, bool is_sin) {
  using std::cos;
  using std::sin;
  const T a = w * coord;
  const T s = sin(a), c = cos(a);
  Jet<T, A> j;
  j.c[0] = is_sin ? coord * c : -(coord * s);
  if (axis >= 0 && axis < A::n_axis) {
    j.c[A::d1[axis]] =
        is_sin ? c - w * coord * s : -(s + w * coord * c);
    const int d2 = A::d2[axis];
    if (d2 >= 0)
      j.c[d2] = is_sin ? -(2.0 * (w * s)) - (w * w) * (coord * c)
                       : -(2.0 * (w * c)) + (w * w) * (coord * s);
  }
  return j;
}

template <class T, class A>
inline BundleT<T> to_bundle(const Jet<T, A>& j) {
  BundleT<T> b;
  b.u = j.c[0];
  for (Deriv d : {Deriv::Ux, Deriv::Uy, Deriv::Ut, Deriv::Uxx, Deriv::Uyy, Deriv::Utt}) {
    const int c = A::comp(d);
    if (c >= 0) b.by(d) = j.c[c];
  }
  return b;
}

// ---------------------------------------------------------------------------
// PointKernel: evaluates the model (feature map -> optional centered-L2
// normalization -> head) at one space-time point as a jet, and runs the
// adjoint pass that turns an output-jet adjoint into parameter gradients.
//
// T = double computes values and exact loss gradients; T = Dual runs the same
// code forward-over-reverse for exact Hessian-vector products. The kernel
// caches all intermediates, so backward() must follow a forward() at the same
// point and parameters. One kernel per thread; no allocation after warm-up.
// ---------------------------------------------------------------------------

template <class T, class A>
class PointKernel {
 public:
  explicit PointKernel(const ModelSpec& spec)
      : spec_(spec), layout_(make_layout(spec)), F_(spec.feature_width()) {
    feats_.resize(F_);
    hfeats_.resize(F_);
    featbar_.resize(F_);
    hbar_.resize(F_);
    norm_applied_ = spec.frontend == FrontendKind::SafeNet && spec.bank.normalize;
    if (norm_applied_) cfeats_.resize(F_);
    if (spec.frontend == FrontendKind::SafeNet) {
      const int n = spec.bank.n_sets;
      txc_.resize(n);
      txs_.resize(n);
      ttc_.resize(n);
      tts_.resize(n);
      if (spec.space_dim == 2) {
        tyc_.resize(n);
        tys_.resize(n);
        pxy_.resize(spec.bank.fourier_width());
      }
      prods_.resize(spec.bank.fourier_width());
      off_freq_ = layout_.offset("feature-frequencies");
      off_coeff_ = layout_.offset("feature-coeffs");
    }
    if (spec.frontend == FrontendKind::Rbf) {
      phi_.resize(spec.rbf.m);
      off_rbfw_ = layout_.offset("rbf-weights");
      if (layout_.has("rbf-poly-weights")) off_rbfpw_ = layout_.offset("rbf-poly-weights");
    }
    if (spec.head == HeadKind::Mlp) {
      zs_.assign(spec.depth, std::vector<Jet<T, A>>(spec.width));
      as_.assign(spec.depth, std::vector<Jet<T, A>>(spec.width));
      cds_.assign(spec.depth, std::vector<ChainDerivs<T>>(spec.width));
      abar_.resize(spec.width);
      abar2_.resize(spec.width);
      for (int l = 1; l <= spec.depth; ++l) {
        off_W_.push_back(layout_.offset("W" + std::to_string(l)));
        off_b_.push_back(layout_.offset("b" + std::to_string(l)));
      }
    }
    if (spec.head != HeadKind::KernelSum) {
      off_wout_ = layout_.offset("w_out");
      off_bout_ = layout_.offset("b_out");
    }
  }

  const ParamLayout& layout() const { return layout_; }
  int n_params() const { return layout_.total; }

  /// Forward evaluation; returns the jet of u at (x, y, t).
  const Jet<T, A>& forward(const T* params, double x, double y, double t) {
    x_ = x;
    y_ = y;
    t_ = t;
    frontend_forward(params, x, y, t);
    if (norm_applied_)
      normalize_forward();
    else
      hfeats_ = feats_;
    head_forward(params);
    return out_;
  }

  /// Accumulates d<ubar, u_jet>/d(params) into grad (+=).
  void backward(const Jet<T, A>& ubar, const T* params, T* grad) {
    for (auto& j : hbar_) j.set_zero();
    head_backward(ubar, params, grad);
    if (norm_applied_)
      normalize_backward();
    else
      featbar_ = hbar_;
    frontend_backward(params, grad);
  }

  /// Head-input features from the last forward (post-normalization).
  const std::vector<Jet<T, A>>& features() const { return hfeats_; }

 private:
  static constexpr double kTinyNorm = 1e-300;

  void axes_setup(double x, double y, double t) {
    if (spec_.space_dim == 2) {
      d_ = 3;
      vals_[0] = x;
      vals_[1] = y;
      vals_[2] = t;
      axes_[0] = A::axis_x;
      axes_[1] = A::axis_y;
      axes_[2] = A::axis_t;
    } else {
      d_ = 2;
      vals_[0] = x;
      vals_[1] = t;
      axes_[0] = A::axis_x;
      axes_[1] = A::axis_t;
    }
  }

  void frontend_forward(const T* params, double x, double y, double t) {
    axes_setup(x, y, t);
    switch (spec_.frontend) {
      case FrontendKind::Identity:
        identity_forward();
        break;
      case FrontendKind::SafeNet:
        safenet_forward(params, x, y, t);
        break;
      case FrontendKind::FourierEmbed:
        if (spec_.fe_omega == 0.0) {
          identity_forward();
        } else {
          feats_[0] = Jet<T, A>::constant(T(1.0));
          for (int k = 1; k <= spec_.fe_modes; ++k) {
            feats_[2 * k - 1] = jets::trig_axis<T, A>(k * spec_.fe_omega, x, A::axis_x, false);
            feats_[2 * k] = jets::trig_axis<T, A>(k * spec_.fe_omega, x, A::axis_x, true);
          }
          feats_[1 + 2 * spec_.fe_modes] = coord_jet<T, A>(t, A::axis_t);
        }
        break;
      case FrontendKind::Rff:
        rff_forward();
        break;
      case FrontendKind::Rbf:
        rbf_forward(params, x, y, t);
        break;
    }
  }

  void identity_forward() {
    for (int a = 0; a < d_; ++a) feats_[a] = coord_jet<T, A>(vals_[a], axes_[a]);
  }

  void safenet_forward(const T* params, double x, double y, double t) {
    const FeatureBank& bank = spec_.bank;
    const int n = bank.n_sets;
    const int combos = bank.n_combos();
    const T* freq = params + off_freq_;
    const T* coeff = params + off_coeff_;
    const int lam_off = spec_.space_dim == 2 ? 2 * n : n;
    for (int l = 0; l < n; ++l) {
      const T& wx = freq[l];
      const T& lt = freq[lam_off + l];
      txc_[l] = trig_param_jet<T, A>(wx, x, A::axis_x, false);
      txs_[l] = trig_param_jet<T, A>(wx, x, A::axis_x, true);
      ttc_[l] = trig_param_jet<T, A>(lt, t, A::axis_t, false);
      tts_[l] = trig_param_jet<T, A>(lt, t, A::axis_t, true);
      if (spec_.space_dim == 2) {
        const T& wy = freq[n + l];
        tyc_[l] = trig_param_jet<T, A>(wy, y, A::axis_y, false);
        tys_[l] = trig_param_jet<T, A>(wy, y, A::axis_y, true);
      }
      for (int j = 0; j < combos; ++j) {
        const int idx = l * combos + j;
        const Jet<T, A>& fx = (j & 1) ? txs_[l] : txc_[l];
        if (spec_.space_dim == 1) {
          const Jet<T, A>& ft = ((j >> 1) & 1) ? tts_[l] : ttc_[l];
          prods_[idx] = jmul(fx, ft);
        } else {
          const Jet<T, A>& fy = ((j >> 1) & 1) ? tys_[l] : tyc_[l];
          const Jet<T, A>& ft = ((j >> 2) & 1) ? tts_[l] : ttc_[l];
          pxy_[idx] = jmul(fx, fy);
          prods_[idx] = jmul(pxy_[idx], ft);
        }
        feats_[idx] = jscale(coeff[idx], prods_[idx]);
      }
    }
    const int fw = bank.fourier_width();
    for (size_t i = 0; i < bank.dkf.size(); ++i)
      feats_[fw + i] = dkf_jet<T, A>(bank.dkf[i], x, y);
  }

  void rff_forward() {
    constexpr double two_pi = 6.28318530717958647692;
    const RffMap& map = spec_.rff;
    for (int f = 0; f < map.m; ++f) {
      Jet<T, A> p;
      double val = 0.0;
      double cf[3] = {0.0, 0.0, 0.0};
      for (int a = 0; a < d_; ++a) {
        cf[a] = two_pi * map.B[static_cast<size_t>(f) * d_ + a] * map.axis_scale[a];
        val += cf[a] * vals_[a];
      }
      p.c[0] = T(val);
      for (int a = 0; a < d_; ++a)
        if (axes_[a] >= 0) p.c[A::d1[axes_[a]]] = T(cf[a]);
      feats_[f] = jchain(p, cd_cos(p.c[0]));
      feats_[map.m + f] = jchain(p, cd_sin(p.c[0]));
    }
  }

  void rbf_forward(const T* params, double x, double y, double t) {
    const RbfMap& map = spec_.rbf;
    const double inv2s2 = 1.0 / (2.0 * map.sigma * map.sigma);
    den_.set_zero();
    num_.set_zero();
    for (int i = 0; i < map.m; ++i) {
      Jet<T, A> s;
      for (int a = 0; a < d_; ++a) {
        Jet<T, A> w;
        w.c[0] = T(vals_[a] - map.centers[static_cast<size_t>(i) * d_ + a]);
        if (axes_[a] >= 0) w.c[A::d1[axes_[a]]] = T(1.0);
        jadd_inplace(s, jmul(w, w));
      }
      const Jet<T, A> arg = jscale(T(-inv2s2), s);
      phi_[i] = jchain(arg, cd_exp(arg.c[0]));
      jadd_inplace(den_, phi_[i]);
      jaxpy(params[off_rbfw_ + i], phi_[i], num_);
    }
    invden_ = jchain(den_, cd_recip(den_.c[0]));
    feats_[0] = jmul(num_, invden_);
    if (map.n_poly() > 0) {
      const Jet<T, A> cx = coord_jet<T, A>(x, A::axis_x);
      const Jet<T, A> ct = coord_jet<T, A>(t, A::axis_t);
      feats_[1] = Jet<T, A>::constant(T(1.0));
      if (d_ == 2) {
        feats_[2] = cx;
        feats_[3] = ct;
        feats_[4] = jmul(cx, cx);
        feats_[5] = jmul(cx, ct);
        feats_[6] = jmul(ct, ct);
      } else {
        const Jet<T, A> cy = coord_jet<T, A>(y, A::axis_y);
        feats_[2] = cx;
        feats_[3] = cy;
        feats_[4] = ct;
        feats_[5] = jmul(cx, cx);
        feats_[6] = jmul(cx, cy);
        feats_[7] = jmul(cx, ct);
        feats_[8] = jmul(cy, cy);
        feats_[9] = jmul(cy, ct);
        feats_[10] = jmul(ct, ct);
      }
    }
  }

  void normalize_forward() {
    Jet<T, A> mean;
    for (int f = 0; f < F_; ++f) jadd_inplace(mean, feats_[f]);
    mean = jscale(T(1.0 / F_), mean);
    q_.set_zero();
    for (int f = 0; f < F_; ++f) {
      cfeats_[f] = jsub(feats_[f], mean);
      const Jet<T, A> sq = jmul(cfeats_[f], cfeats_[f]);
      jadd_inplace(q_, sq);
    }
    norm_guard_ = !(primal(q_.c[0]) > kTinyNorm);
    Jet<T, A> root;
    if (!norm_guard_) {
      cd_sqrt_ = cd_sqrt(q_.c[0]);
      root = jchain(q_, cd_sqrt_);
    }
    denom_ = root;
    denom_.c[0] += T(spec_.bank.eps);
    cd_recip_ = cd_recip(denom_.c[0]);
    inv_ = jchain(denom_, cd_recip_);
    for (int f = 0; f < F_; ++f) hfeats_[f] = jmul(cfeats_[f], inv_);
  }

  void normalize_backward() {
    Jet<T, A> invbar;
    for (int f = 0; f < F_; ++f) featbar_[f].set_zero();
    for (int f = 0; f < F_; ++f) jmul_adj(hbar_[f], cfeats_[f], inv_, featbar_[f], invbar);
    Jet<T, A> denombar;
    jchain_adj(invbar, denom_, cd_recip_, denombar);
    if (!norm_guard_) {
      Jet<T, A> qbar;
      jchain_adj(denombar, q_, cd_sqrt_, qbar);
      for (int f = 0; f < F_; ++f) jmul_adj(qbar, cfeats_[f], cfeats_[f], featbar_[f], featbar_[f]);
    }
    Jet<T, A> msum;
    for (int f = 0; f < F_; ++f) jadd_inplace(msum, featbar_[f]);
    const Jet<T, A> corr = jscale(T(1.0 / F_), msum);
    for (int f = 0; f < F_; ++f) featbar_[f] = jsub(featbar_[f], corr);
  }

  void store_unit(int l, int i, Activation act, const Jet<T, A>& z) {
    zs_[l][i] = z;
    cds_[l][i] = cd_activation(act, z.c[0]);
    as_[l][i] = jchain(z, cds_[l][i]);
  }

  void head_forward(const T* params) {
    switch (spec_.head) {
      case HeadKind::Mlp: {
        const std::vector<Jet<T, A>>* prev = &hfeats_;
        int fan = F_;
        for (int l = 0; l < spec_.depth; ++l) {
          const T* W = params + off_W_[l];
          const T* b = params + off_b_[l];
          const Activation act = l == 0 ? spec_.first_act : spec_.act;
          // Rows are processed four at a time with independent accumulators.
          // Each row keeps its own strict j-order, so results are bitwise
          // identical to the row-at-a-time loop; the grouping only breaks the
          // per-row FMA latency chain.
          int i = 0;
          for (; i + 4 <= spec_.width; i += 4) {
            Jet<T, A> z0 = Jet<T, A>::constant(b[i]);
            Jet<T, A> z1 = Jet<T, A>::constant(b[i + 1]);
            Jet<T, A> z2 = Jet<T, A>::constant(b[i + 2]);
            Jet<T, A> z3 = Jet<T, A>::constant(b[i + 3]);
            const T* w0 = W + static_cast<size_t>(i) * fan;
            const T* w1 = w0 + fan;
            const T* w2 = w1 + fan;
            const T* w3 = w2 + fan;
            for (int j = 0; j < fan; ++j) {
              const Jet<T, A>& p = (*prev)[j];
              jaxpy(w0[j], p, z0);
              jaxpy(w1[j], p, z1);
              jaxpy(w2[j], p, z2);
              jaxpy(w3[j], p, z3);
            }
            store_unit(l, i, act, z0);
            store_unit(l, i + 1, act, z1);
            store_unit(l, i + 2, act, z2);
            store_unit(l, i + 3, act, z3);
          }
          for (; i < spec_.width; ++i) {
            Jet<T, A> z = Jet<T, A>::constant(b[i]);
            const T* wrow = W + static_cast<size_t>(i) * fan;
            for (int j = 0; j < fan; ++j) jaxpy(wrow[j], (*prev)[j], z);
            store_unit(l, i, act, z);
          }
          prev = &as_[l];
          fan = spec_.width;
        }
        out_ = Jet<T, A>::constant(params[off_bout_]);
        const T* wout = params + off_wout_;
        for (int j = 0; j < fan; ++j) jaxpy(wout[j], (*prev)[j], out_);
        break;
      }
      case HeadKind::Linear: {
        out_ = Jet<T, A>::constant(params[off_bout_]);
        for (int j = 0; j < F_; ++j) jaxpy(params[off_wout_ + j], hfeats_[j], out_);
        break;
      }
      case HeadKind::KernelSum: {
        out_ = hfeats_[0];
        const int np = spec_.rbf.n_poly();
        for (int k = 0; k < np; ++k) jaxpy(params[off_rbfpw_ + k], hfeats_[1 + k], out_);
        break;
      }
    }
  }

  void head_backward(const Jet<T, A>& ubar, const T* params, T* grad) {
    switch (spec_.head) {
      case HeadKind::Mlp: {
        const int width = spec_.width;
        const std::vector<Jet<T, A>>& alast = as_[spec_.depth - 1];
        grad[off_bout_] += ubar.c[0];
        const T* wout = params + off_wout_;
        for (int j = 0; j < width; ++j) {
          grad[off_wout_ + j] += jdot(ubar, alast[j]);
          abar_[j] = jscale(wout[j], ubar);
        }
        for (int l = spec_.depth - 1; l >= 0; --l) {
          const std::vector<Jet<T, A>>& aprev = l == 0 ? hfeats_ : as_[l - 1];
          std::vector<Jet<T, A>>& aprevbar = l == 0 ? hbar_ : abar2_;
          if (l > 0)
            for (int j = 0; j < width; ++j) abar2_[j].set_zero();
          const int fan = l == 0 ? F_ : width;
          const T* W = params + off_W_[l];
          T* gW = grad + off_W_[l];
          // Same four-row grouping as head_forward. For each j, aprevbar[j]
          // still receives contributions in ascending-i order, so results are
          // bitwise identical to the row-at-a-time loop.
          int i = 0;
          for (; i + 4 <= width; i += 4) {
            Jet<T, A> zb0, zb1, zb2, zb3;
            jchain_adj(abar_[i], zs_[l][i], cds_[l][i], zb0);
            jchain_adj(abar_[i + 1], zs_[l][i + 1], cds_[l][i + 1], zb1);
            jchain_adj(abar_[i + 2], zs_[l][i + 2], cds_[l][i + 2], zb2);
            jchain_adj(abar_[i + 3], zs_[l][i + 3], cds_[l][i + 3], zb3);
            grad[off_b_[l] + i] += zb0.c[0];
            grad[off_b_[l] + i + 1] += zb1.c[0];
            grad[off_b_[l] + i + 2] += zb2.c[0];
            grad[off_b_[l] + i + 3] += zb3.c[0];
            const T* w0 = W + static_cast<size_t>(i) * fan;
            const T* w1 = w0 + fan;
            const T* w2 = w1 + fan;
            const T* w3 = w2 + fan;
            T* g0 = gW + static_cast<size_t>(i) * fan;
            T* g1 = g0 + fan;
            T* g2 = g1 + fan;
            T* g3 = g2 + fan;
            for (int j = 0; j < fan; ++j) {
              const Jet<T, A>& p = aprev[j];
              g0[j] += jdot(zb0, p);
              g1[j] += jdot(zb1, p);
              g2[j] += jdot(zb2, p);
              g3[j] += jdot(zb3, p);
              Jet<T, A>& pb = aprevbar[j];
              jaxpy(w0[j], zb0, pb);
              jaxpy(w1[j], zb1, pb);
              jaxpy(w2[j], zb2, pb);
              jaxpy(w3[j], zb3, pb);
            }
          }
          for (; i < width; ++i) {
            Jet<T, A> zbar;
            jchain_adj(abar_[i], zs_[l][i], cds_[l][i], zbar);
            grad[off_b_[l] + i] += zbar.c[0];
            const T* wrow = W + static_cast<size_t>(i) * fan;
            T* grow = gW + static_cast<size_t>(i) * fan;
            for (int j = 0; j < fan; ++j) {
              grow[j] += jdot(zbar, aprev[j]);
              jaxpy(wrow[j], zbar, aprevbar[j]);
            }
          }
          if (l > 0) std::swap(abar_, abar2_);
        }
        break;
      }
      case HeadKind::Linear: {
        grad[off_bout_] += ubar.c[0];
        for (int j = 0; j < F_; ++j) {
          grad[off_wout_ + j] += jdot(ubar, hfeats_[j]);
          jaxpy(params[off_wout_ + j], ubar, hbar_[j]);
        }
        break;
      }
      case HeadKind::KernelSum: {
        jadd_inplace(hbar_[0], ubar);
        const int np = spec_.rbf.n_poly();
        for (int k = 0; k < np; ++k) {
          grad[off_rbfpw_ + k] += jdot(ubar, hfeats_[1 + k]);
          jaxpy(params[off_rbfpw_ + k], ubar, hbar_[1 + k]);
        }
        break;
      }
    }
  }

  void frontend_backward(const T* params, T* grad) {
    switch (spec_.frontend) {
      case FrontendKind::SafeNet:
        safenet_backward(params, grad);
        break;
      case FrontendKind::Rbf: {
        Jet<T, A> numbar, invdenbar;
        jmul_adj(featbar_[0], num_, invden_, numbar, invdenbar);
        for (int i = 0; i < spec_.rbf.m; ++i) grad[off_rbfw_ + i] += jdot(numbar, phi_[i]);
        break;  // centers and sigma are frozen; monomials carry no parameters
      }
      default:
        break;  // identity / embedding / RFF frontends have no parameters
    }
  }

  void safenet_backward(const T* params, T* grad) {
    const FeatureBank& bank = spec_.bank;
    const int n = bank.n_sets;
    const int combos = bank.n_combos();
    const T* freq = params + off_freq_;
    const T* coeff = params + off_coeff_;
    const int lam_off = spec_.space_dim == 2 ? 2 * n : n;
    for (int l = 0; l < n; ++l) {
      const T& wx = freq[l];
      const T& lt = freq[lam_off + l];
      const Jet<T, A> dxc = trig_param_jet_dfreq<T, A>(wx, x_, A::axis_x, false);
      const Jet<T, A> dxs = trig_param_jet_dfreq<T, A>(wx, x_, A::axis_x, true);
      const Jet<T, A> dtc = trig_param_jet_dfreq<T, A>(lt, t_, A::axis_t, false);
      const Jet<T, A> dts = trig_param_jet_dfreq<T, A>(lt, t_, A::axis_t, true);
      Jet<T, A> dyc, dys;
      if (spec_.space_dim == 2) {
        const T& wy = freq[n + l];
        dyc = trig_param_jet_dfreq<T, A>(wy, y_, A::axis_y, false);
        dys = trig_param_jet_dfreq<T, A>(wy, y_, A::axis_y, true);
      }
      T gwx(0.0), gwy(0.0), glt(0.0);
      for (int j = 0; j < combos; ++j) {
        const int idx = l * combos + j;
        const Jet<T, A>& fb = featbar_[idx];
        grad[off_coeff_ + idx] += jdot(fb, prods_[idx]);
        const T& cj = coeff[idx];
        const Jet<T, A>& fx = (j & 1) ? txs_[l] : txc_[l];
        const Jet<T, A>& dx = (j & 1) ? dxs : dxc;
        if (spec_.space_dim == 1) {
          const Jet<T, A>& ft = ((j >> 1) & 1) ? tts_[l] : ttc_[l];
          const Jet<T, A>& dt = ((j >> 1) & 1) ? dts : dtc;
          gwx += cj * jdot(fb, jmul(dx, ft));
          glt += cj * jdot(fb, jmul(fx, dt));
        } else {
          const Jet<T, A>& fy = ((j >> 1) & 1) ? tys_[l] : tyc_[l];
          const Jet<T, A>& dy = ((j >> 1) & 1) ? dys : dyc;
          const Jet<T, A>& ft = ((j >> 2) & 1) ? tts_[l] : ttc_[l];
          const Jet<T, A>& dt = ((j >> 2) & 1) ? dts : dtc;
          gwx += cj * jdot(fb, jmul(jmul(dx, fy), ft));
          gwy += cj * jdot(fb, jmul(jmul(fx, dy), ft));
          glt += cj * jdot(fb, jmul(pxy_[idx], dt));
        }
      }
      grad[off_freq_ + l] += gwx;
      if (spec_.space_dim == 2) grad[off_freq_ + n + l] += gwy;
      grad[off_freq_ + lam_off + l] += glt;
    }
  }

  const ModelSpec& spec_;
  ParamLayout layout_;
  int F_ = 0;
  bool norm_applied_ = false;
  bool norm_guard_ = false;
  double x_ = 0.0, y_ = 0.0, t_ = 0.0;
  int d_ = 2;
  double vals_[3] = {0.0, 0.0, 0.0};
  int axes_[3] = {-1, -1, -1};

  int off_freq_ = -1, off_coeff_ = -1, off_rbfw_ = -1, off_rbfpw_ = -1;
  std::vector<int> off_W_, off_b_;
  int off_wout_ = -1, off_bout_ = -1;

  std::vector<Jet<T, A>> feats_, hfeats_, cfeats_, featbar_, hbar_;
  std::vector<Jet<T, A>> txc_, txs_, tyc_, tys_, ttc_, tts_, prods_, pxy_;
  std::vector<Jet<T, A>> phi_;
  Jet<T, A> num_, den_, invden_;
  Jet<T, A> q_, denom_, inv_, out_;
  ChainDerivs<T> cd_sqrt_, cd_recip_;
  std::vector<std::vector<Jet<T, A>>> zs_, as_;
  std::vector<std::vector<ChainDerivs<T>>> cds_;
  std::vector<Jet<T, A>> abar_, abar2_;
};

}  // namespace fepinn
