#include "fepinn/train/schedule.hpp"

#include <cmath>

#include "fepinn/core/errors.hpp"

namespace fepinn {

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::S1: return "S1";
    case ScheduleKind::S2: return "S2";
    case ScheduleKind::S3a: return "S3a";
    case ScheduleKind::S3b: return "S3b";
    case ScheduleKind::S3c: return "S3c";
    case ScheduleKind::S3d: return "S3d";
    case ScheduleKind::S3e: return "S3e";
    case ScheduleKind::S4: return "S4";
  }
  return "S1";
}

ScheduleKind schedule_from_string(const std::string& name) {
  for (ScheduleKind k : all_schedules())
    if (name == to_string(k)) return k;
  throw ConfigError("unknown schedule '" + name + "'");
}

const std::vector<ScheduleKind>& all_schedules() {
  static const std::vector<ScheduleKind> all = {
      ScheduleKind::S1,  ScheduleKind::S2,  ScheduleKind::S3a, ScheduleKind::S3b,
      ScheduleKind::S3c, ScheduleKind::S3d, ScheduleKind::S3e, ScheduleKind::S4};
  return all;
}

std::vector<Phase> make_schedule(ScheduleKind kind, int budget) {
  if (budget <= 0) throw ConfigError("iteration budget must be positive");
  const double s = budget / 40000.0;
  auto scaled = [&](double ref) { return static_cast<int>(std::llround(ref * s)); };
  auto frac = [&](double f) { return static_cast<int>(std::llround(f * budget)); };

  std::vector<Phase> ph;
  switch (kind) {
    case ScheduleKind::S1: {
      const int adam = budget == 7000 ? 5000 : frac(0.75);
      ph.push_back({PhaseOpt::Adam, adam});
      ph.push_back({PhaseOpt::Lbfgs, budget - adam});
      break;
    }
    case ScheduleKind::S2: {
      const int q = scaled(3000.0);
      Phase p1{PhaseOpt::Adam, q};
      Phase p2{PhaseOpt::Lbfgs};
      p2.fill_to = budget - 2 * q;
      p2.until_stall = true;
      Phase p3{PhaseOpt::Adam};
      p3.fill_to = budget - q;
      p3.lr_scale = 0.5;
      Phase p4{PhaseOpt::Lbfgs, q};
      ph = {p1, p2, p3, p4};
      break;
    }
    case ScheduleKind::S3a:
      ph.push_back({PhaseOpt::Adam, frac(0.5)});
      ph.push_back({PhaseOpt::Lbfgs, budget - frac(0.5)});
      break;
    case ScheduleKind::S3b:
      ph.push_back({PhaseOpt::Adam, frac(0.25)});
      ph.push_back({PhaseOpt::Lbfgs, budget - frac(0.25)});
      break;
    case ScheduleKind::S3c:
      ph.push_back({PhaseOpt::Adam, frac(0.125)});
      ph.push_back({PhaseOpt::Lbfgs, budget - frac(0.125)});
      break;
    case ScheduleKind::S3d: {
      const int a1 = frac(0.625), lb = frac(0.25);
      ph.push_back({PhaseOpt::Adam, a1});
      ph.push_back({PhaseOpt::Lbfgs, lb});
      ph.push_back({PhaseOpt::Adam, budget - a1 - lb});
      break;
    }
    case ScheduleKind::S3e: {
      Phase p1{PhaseOpt::Adam};
      p1.fill_to = budget;
      p1.plateau_patience = std::max(1, scaled(1000.0));
      Phase p2{PhaseOpt::Lbfgs};
      p2.fill_to = budget;
      ph = {p1, p2};
      break;
    }
    case ScheduleKind::S4:
      ph.push_back({PhaseOpt::Adam, budget});
      break;
  }
  return ph;
}

}  // namespace fepinn
