#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "fepinn/train/loss.hpp"
#include "fepinn/train/optim.hpp"
#include "fepinn/train/schedule.hpp"

namespace fepinn {

struct IterRow {
  int iter = 0;
  int phase = 0;
  double loss = 0.0, res = 0.0, bc = 0.0, ic = 0.0;
  double grad_norm = 0.0;
  double l2re = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  std::vector<double> params;
  std::vector<IterRow> trajectory;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  double final_l2re = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  int iters_run = 0;
  double seconds = 0.0;
};

struct TrainOptions {
  double adam_lr = 1e-3;
  int log_every = 100;
  bool use_rba = false;    ///< residual-weight recursion before every iteration
  bool use_ntk = false;    ///< kernel-trace loss balancing
  int ntk_every = 1000;    ///< global-iteration period of the rebalancing
  /// Optional metric evaluated at log points and at the end (e.g. the
  /// relative L2 error against a reference solution).
  std::function<double(const std::vector<double>&)> metric;
  /// Called after every completed optimizer iteration.
  std::function<void(int)> on_iteration;
};

/// Runs a phase schedule from `init`, logging every `log_every` iterations
/// plus a final row. Training stops early (with the diverged flag set) as
/// soon as a non-finite loss or gradient is produced.
TrainResult run_schedule(LossEvaluator& ev, const std::vector<Phase>& phases,
                         std::vector<double> init, const TrainOptions& opt = {});

}  // namespace fepinn
