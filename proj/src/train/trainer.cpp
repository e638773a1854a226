#include "fepinn/train/trainer.hpp"

#include <chrono>
#include <cmath>

namespace fepinn {
namespace {

bool finite_state(double f, const std::vector<double>& g) {
  if (!std::isfinite(f)) return false;
  for (double x : g)
    if (!std::isfinite(x)) return false;
  return true;
}

constexpr int kStallWindow = 200;
constexpr double kStallRelTol = 1e-12;
constexpr double kPlateauRelTol = 1e-4;

}  // namespace

TrainResult run_schedule(LossEvaluator& ev, const std::vector<Phase>& phases,
                         std::vector<double> init, const TrainOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainResult res;
  res.params = std::move(init);
  std::vector<double>& params = res.params;
  std::vector<double> g;

  int it = 0;
  LossParts parts;
  auto log_row = [&](int phase_idx, double gnorm) {
    IterRow row{it, phase_idx, parts.total, parts.res, parts.bc, parts.ic, gnorm};
    if (opt.metric) row.l2re = opt.metric(params);
    res.trajectory.push_back(row);
  };

  for (size_t pi = 0; pi < phases.size() && !res.diverged; ++pi) {
    const Phase& ph = phases[pi];
    const int phase_end = ph.fill_to >= 0 ? ph.fill_to : it + std::max(0, ph.iters);

    if (ph.opt == PhaseOpt::Adam) {
      AdamOptions ao;
      ao.lr = opt.adam_lr * ph.lr_scale;
      Adam adam(ev.n_params(), ao);
      double best = std::numeric_limits<double>::infinity();
      int since_best = 0;
      while (it < phase_end) {
        if (opt.use_rba) ev.rba_update(params);
        if (opt.use_ntk && it % opt.ntk_every == 0) ev.apply_ntk_weights(params);
        parts = ev.loss_grad(params, g);
        if (!finite_state(parts.total, g)) {
          res.diverged = true;
          break;
        }
        if (it % opt.log_every == 0) log_row(static_cast<int>(pi), l2_norm(g));
        if (ph.plateau_patience > 0) {
          if (parts.total < best * (1.0 - kPlateauRelTol)) {
            best = parts.total;
            since_best = 0;
          } else if (++since_best >= ph.plateau_patience) {
            break;
          }
        }
        adam.step(params, g);
        ++it;
        if (opt.on_iteration) opt.on_iteration(it);
      }
    } else {
      Lbfgs lb(ev.n_params());
      const Objective obj = [&](const std::vector<double>& x, std::vector<double>& grad) {
        parts = ev.loss_grad(x, grad);
        return parts.total;
      };
      double f = 0.0;
      bool need_eval = true;
      std::vector<double> fhist;
      while (it < phase_end) {
        if (opt.use_rba) {
          ev.rba_update(params);
          need_eval = true;
        }
        if (opt.use_ntk && it % opt.ntk_every == 0) {
          ev.apply_ntk_weights(params);
          lb.clear_memory();
          need_eval = true;
        }
        if (need_eval) {
          f = obj(params, g);
          need_eval = false;
        }
        if (!finite_state(f, g)) {
          res.diverged = true;
          break;
        }
        if (it % opt.log_every == 0) log_row(static_cast<int>(pi), l2_norm(g));
        fhist.push_back(f);
        if (static_cast<int>(fhist.size()) > kStallWindow) {
          const double fold = fhist[fhist.size() - 1 - kStallWindow];
          if (fold - f < kStallRelTol * std::max(1.0, std::abs(fold))) break;
        }
        const LbfgsStatus st = lb.step(obj, params, f, g);
        ++it;
        if (opt.on_iteration) opt.on_iteration(it);
        if (st == LbfgsStatus::Diverged) {
          res.diverged = true;
          break;
        }
        if (st == LbfgsStatus::Converged || st == LbfgsStatus::LineSearchFailed) break;
      }
    }
  }

  res.iters_run = it;
  if (!res.diverged) {
    parts = ev.loss_grad(params, g);
    if (!finite_state(parts.total, g)) {
      res.diverged = true;
    } else {
      if (res.trajectory.empty() || res.trajectory.back().iter != it)
        log_row(static_cast<int>(phases.empty() ? 0 : phases.size() - 1), l2_norm(g));
      res.final_loss = parts.total;
      if (opt.metric) res.final_l2re = res.trajectory.back().l2re;
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace fepinn
