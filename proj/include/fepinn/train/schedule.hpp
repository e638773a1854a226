#pragma once

#include <string>
#include <vector>

namespace fepinn {

/// Optimizer phase plans, scaled from a reference budget of 40k iterations:
///   S1  Adam 3/4 then L-BFGS 1/4 (at the 7k desk budget: 5000 + 2000)
///   S2  short Adam, L-BFGS until stall, half-rate Adam fill, short L-BFGS
///   S3a Adam 1/2, L-BFGS 1/2
///   S3b Adam 1/4, L-BFGS 3/4
///   S3c Adam 1/8, L-BFGS 7/8
///   S3d Adam 5/8, L-BFGS 1/4, Adam 1/8
///   S3e Adam until plateau, L-BFGS for the rest
///   S4  Adam only
enum class ScheduleKind { S1, S2, S3a, S3b, S3c, S3d, S3e, S4 };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_from_string(const std::string& name);
const std::vector<ScheduleKind>& all_schedules();

enum class PhaseOpt { Adam, Lbfgs };

struct Phase {
  PhaseOpt opt = PhaseOpt::Adam;
  int iters = -1;            ///< fixed iteration count; -1 when driven by fill_to
  int fill_to = -1;          ///< run until the global iteration counter reaches this
  double lr_scale = 1.0;     ///< multiplier on the base Adam learning rate
  bool until_stall = false;  ///< L-BFGS: end the phase at the first stall
  int plateau_patience = 0;  ///< Adam: end after this many iters without a new best
};

/// Expands a schedule into concrete phases for the given iteration budget.
std::vector<Phase> make_schedule(ScheduleKind kind, int budget);

}  // namespace fepinn
