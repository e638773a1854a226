#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fepinn/model/model.hpp"
#include "fepinn/pde/reference.hpp"
#include "fepinn/train/sampling.hpp"
#include "fepinn/train/schedule.hpp"
#include "fepinn/train/trainer.hpp"

namespace fepinn {

/// Everything needed to reproduce one training run (minus the seed-derived
/// randomness): problem, method, schedule, model knobs, sampling sizes and
/// budget. The seed is carried alongside but excluded from the config hash.
struct RunSpec {
  std::string problem = "wave";
  Method method = Method::SAFENET;
  ScheduleKind schedule = ScheduleKind::S1;
  std::uint64_t seed = 0;
  ModelOptions model;
  int n_res = 2000;
  int n_bc = 200;
  int n_ic = 200;
  int budget = 7000;
  double adam_lr = 1e-3;
  int log_every = 100;
  std::string oracle_dir = "oracles";

  std::string tag() const;   ///< summary key, e.g. "wave/SAFENET/S1"
  std::string slug() const;  ///< file-safe name including the seed
  std::uint64_t config_hash() const;
};

struct ExperimentConfig {
  std::vector<std::string> problems = {"wave"};
  std::vector<Method> methods = {Method::SAFENET};
  std::vector<ScheduleKind> schedules = {ScheduleKind::S1};
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  RunSpec base;  ///< shared knobs; its problem/method/schedule/seed are ignored
  std::string out_dir = "results";

  /// Cartesian product problems x methods x schedules x seeds.
  std::vector<RunSpec> expand() const;
};

ExperimentConfig desk_preset();
ExperimentConfig full_preset();
/// Parses a JSON config on top of a preset base ("preset" key, default desk).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

/// Relative L2 error. Throws ConfigError on length mismatch or zero truth.
double l2re(const std::vector<double>& pred, const std::vector<double>& truth);

/// Model values over the evaluation grid, x fastest, then y (2-D), then t.
std::vector<double> predict(const ModelSpec& spec, const std::vector<double>& params,
                            const EvalGrid& grid);
std::vector<double> reference_values(const ReferenceSolution& ref, const EvalGrid& grid);

struct RunOutcome {
  RunSpec spec;
  TrainResult train;
};

/// Trains one run end to end; throws MissingOracle when the problem needs a
/// precomputed reference grid that is not present in spec.oracle_dir.
RunOutcome run_single(const RunSpec& spec);

/// Runs jobs in a worker pool (`jobs` threads; each run itself uses the
/// OpenMP-parallel kernels). Divergent runs are recorded, not fatal.
std::vector<RunOutcome> run_matrix(const std::vector<RunSpec>& runs, int jobs = 1);

void write_trajectory_csv(const std::string& path, const TrainResult& result);
void write_results_csv(const std::string& path, const std::vector<RunOutcome>& rows);
/// Median-over-completed-seeds summary keyed "problem/METHOD/schedule", with
/// schedule-vs-S1 improvement percentages where S1 is present.
std::string summary_json(const std::vector<RunOutcome>& rows);

/// Writes results.csv, summary.json, and per-run trajectory CSVs under
/// out_dir. Returns true when every run completed (no divergence).
bool emit_reports(const std::vector<RunOutcome>& rows, const std::string& out_dir);

}  // namespace fepinn
