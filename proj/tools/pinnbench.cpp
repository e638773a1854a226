// pinnbench: train/evaluate feature-engineered physics-informed solvers,
// run benchmark sweeps, and emit conditioning diagnostics.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fepinn/bench/experiment.hpp"
#include "fepinn/core/errors.hpp"
#include "fepinn/pde/oracle.hpp"
#include "fepinn/spectra/gram.hpp"
#include "fepinn/spectra/slq.hpp"
#include "fepinn/train/loss.hpp"

namespace fs = std::filesystem;
using namespace fepinn;

namespace {

struct Common {
  std::string config;
  std::string preset = "desk";
  std::string out;
  std::string seeds;
  int jobs = 1;
};

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--config", c.config, "JSON experiment config file");
  sc->add_option("--preset", c.preset, "base preset when no config is given")
      ->check(CLI::IsMember({"desk", "full"}));
  sc->add_option("--out", c.out, "output directory (overrides config)");
  sc->add_option("--seeds", c.seeds, "comma-separated seed list (overrides config)");
  sc->add_option("--jobs", c.jobs, "worker-pool size for independent runs");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = !c.config.empty()
                             ? load_config(c.config)
                             : (c.preset == "full" ? full_preset() : desk_preset());
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (!c.seeds.empty()) {
    cfg.seeds.clear();
    std::stringstream ss(c.seeds);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        cfg.seeds.push_back(std::stoull(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad seed '" + tok + "' in --seeds");
      }
    }
    if (cfg.seeds.empty()) throw ConfigError("--seeds parsed to an empty list");
  }
  return cfg;
}

std::string run_line(const RunOutcome& o) {
  std::ostringstream os;
  os << o.spec.tag() << " seed " << o.spec.seed << ": ";
  if (o.train.diverged)
    os << "DIVERGED after " << o.train.iters_run << " iters";
  else {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "l2re=%.6g loss=%.6g", o.train.final_l2re,
                  o.train.final_loss);
    os << buf << " iters=" << o.train.iters_run;
  }
  char tbuf[32];
  std::snprintf(tbuf, sizeof(tbuf), " (%.1fs)", o.train.seconds);
  os << tbuf;
  return os.str();
}

void save_run_checkpoint(const RunOutcome& o, const std::string& out_dir) {
  const PdeProblem problem = make_problem(o.spec.problem);
  const ModelSpec mspec = make_model_spec(o.spec.method, problem, o.spec.model, o.spec.seed);
  fs::create_directories(fs::path(out_dir) / "checkpoints");
  save_checkpoint((fs::path(out_dir) / "checkpoints" / (o.spec.slug() + ".ckpt")).string(),
                  mspec, o.spec.seed, o.train.params);
}

int cmd_train(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const RunSpec spec = cfg.expand().front();
  const RunOutcome o = run_single(spec);
  emit_reports({o}, cfg.out_dir);
  save_run_checkpoint(o, cfg.out_dir);
  std::cout << run_line(o) << "\n";
  return o.train.diverged ? 3 : 0;
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const std::vector<RunOutcome> rows = run_matrix(cfg.expand(), c.jobs);
  const bool ok = emit_reports(rows, cfg.out_dir);
  for (const RunOutcome& o : rows) std::cout << run_line(o) << "\n";
  std::cout << "wrote " << (fs::path(cfg.out_dir) / "results.csv").string() << ", "
            << (fs::path(cfg.out_dir) / "summary.json").string() << "\n";
  return ok ? 0 : 3;
}

int cmd_evaluate(const Common& c, const std::string& ckpt) {
  const ExperimentConfig cfg = resolve(c);
  const RunSpec spec = cfg.expand().front();
  const PdeProblem problem = make_problem(spec.problem);
  const std::uint64_t seed = checkpoint_seed(ckpt);
  const ModelSpec mspec = make_model_spec(spec.method, problem, spec.model, seed);
  const std::vector<double> params = load_checkpoint(ckpt, mspec);
  const ReferenceSolution ref =
      make_reference(problem, spec.oracle_dir + "/" + problem.name + ".csv");
  const EvalGrid grid = make_eval_grid(problem);
  const double err = l2re(predict(mspec, params, grid), reference_values(ref, grid));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", err);
  std::cout << spec.problem << "/" << to_string(spec.method) << " l2re=" << buf << "\n";
  return 0;
}

int cmd_spectral(const Common& c, const std::vector<std::string>& ckpts, int probes,
                 int steps) {
  const ExperimentConfig cfg = resolve(c);
  const RunSpec spec = cfg.expand().front();
  const PdeProblem problem = make_problem(spec.problem);
  fs::create_directories(fs::path(cfg.out_dir) / "spectral");

  struct Item {
    std::string label;
    std::uint64_t seed;
    std::vector<double> params;
  };
  std::vector<Item> items;
  if (ckpts.empty()) {
    RunOutcome o = run_single(spec);
    if (o.train.diverged) {
      std::cerr << "training diverged; no spectrum computed\n";
      return 3;
    }
    items.push_back({spec.slug(), spec.seed, std::move(o.train.params)});
  } else {
    for (const std::string& path : ckpts) {
      const std::uint64_t seed = checkpoint_seed(path);
      const ModelSpec mspec = make_model_spec(spec.method, problem, spec.model, seed);
      items.push_back({fs::path(path).stem().string(), seed, load_checkpoint(path, mspec)});
    }
  }

  std::ofstream traj((fs::path(cfg.out_dir) / "spectral" / "trajectory.csv").string());
  traj << "label,lambda_max,lambda_min,weight_sum_err,mass_above_1,mass_above_100,"
          "mass_above_1e4\n";
  for (const Item& item : items) {
    const ModelSpec mspec = make_model_spec(spec.method, problem, spec.model, item.seed);
    const TrainingSet set =
        sample_training_set(problem, spec.n_res, spec.n_bc, spec.n_ic, item.seed);
    LossEvaluator ev(problem, mspec, set);
    const LinOp op = [&](const std::vector<double>& v, std::vector<double>& out) {
      ev.hvp(item.params, v, out);
    };
    SlqOptions so;
    so.n_probes = probes;
    so.steps = steps;
    so.seed = item.seed;
    const SlqResult r = slq_spectrum(op, static_cast<int>(item.params.size()), so);

    std::ofstream nodes(
        (fs::path(cfg.out_dir) / "spectral" / (item.label + "_nodes.csv")).string());
    nodes << "node,weight,probe\n";
    char buf[160];
    for (const SlqNode& nd : r.nodes) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", nd.node, nd.weight, nd.probe);
      nodes << buf;
    }
    std::ofstream dens(
        (fs::path(cfg.out_dir) / "spectral" / (item.label + "_density.csv")).string());
    dens << "lambda,rho\n";
    for (const auto& [lam, rho] : smoothed_density(r)) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", lam, rho);
      dens << buf;
    }
    double m1 = 0, m100 = 0, m1e4 = 0;
    for (const SlqNode& nd : r.nodes) {
      if (nd.node > 1.0) m1 += nd.weight;
      if (nd.node > 100.0) m100 += nd.weight;
      if (nd.node > 1e4) m1e4 += nd.weight;
    }
    const double inv = 1.0 / std::max(1, r.n_probes);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.3g,%.6g,%.6g,%.6g", r.lambda_max,
                  r.lambda_min, r.max_weight_sum_err, m1 * inv, m100 * inv, m1e4 * inv);
    traj << item.label << "," << buf << "\n";
    std::snprintf(buf, sizeof(buf), "lambda_max=%.6g lambda_min=%.6g", r.lambda_max,
                  r.lambda_min);
    std::cout << item.label << ": " << buf << "\n";
  }
  return 0;
}

int cmd_gram(const Common& c, const std::string& ckpt, int points) {
  const ExperimentConfig cfg = resolve(c);
  const RunSpec spec = cfg.expand().front();
  const PdeProblem problem = make_problem(spec.problem);
  const int combos = 1 << (problem.box.space_dim + 1);
  const int n_sets = std::max(1, spec.model.n_features / combos);
  FeatureBank bank = make_feature_bank(problem, n_sets, false, false);
  if (!ckpt.empty()) {
    const std::uint64_t seed = checkpoint_seed(ckpt);
    const ModelSpec mspec = make_model_spec(spec.method, problem, spec.model, seed);
    if (mspec.frontend != FrontendKind::SafeNet)
      throw ConfigError("gram-check needs a Fourier-feature model checkpoint");
    const std::vector<double> params = load_checkpoint(ckpt, mspec);
    const ParamLayout layout = make_layout(mspec);
    const int nf = mspec.bank.n_sets;
    const double* freq = params.data() + layout.offset("feature-frequencies");
    bank = mspec.bank;
    std::copy(freq, freq + nf, bank.omega_x.begin());
    if (bank.space_dim == 2) std::copy(freq + nf, freq + 2 * nf, bank.omega_y.begin());
    std::copy(freq + (bank.n_freq_axes() - 1) * nf, freq + bank.n_freq_axes() * nf,
              bank.lambda_t.begin());
    const double* coef = params.data() + layout.offset("feature-coeffs");
    std::copy(coef, coef + layout.size("feature-coeffs"), bank.coeff.begin());
    bank.dkf.clear();
  }
  const GramReport rep = gram_conditioning(problem, bank, points);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "width=%d grid=%d/axis eig_min=%.6g eig_max=%.6g cond=%.9g "
                "scaled_cond=%.9g nonzero_ratio=%.9g singular=%d",
                rep.width, rep.points_per_axis, rep.eig_min, rep.eig_max, rep.cond,
                rep.cond_scaled, rep.nonzero_ratio, rep.singular ? 1 : 0);
  std::cout << buf << "\n";
  fs::create_directories(cfg.out_dir);
  nlohmann::json j;
  j["width"] = rep.width;
  j["points_per_axis"] = rep.points_per_axis;
  j["eig_min"] = rep.eig_min;
  j["eig_max"] = rep.eig_max;
  j["cond"] = rep.singular ? nlohmann::json() : nlohmann::json(rep.cond);
  j["cond_scaled"] = std::isfinite(rep.cond_scaled) ? nlohmann::json(rep.cond_scaled)
                                                    : nlohmann::json();
  j["nonzero_ratio"] = rep.nonzero_ratio;
  j["singular"] = rep.singular;
  j["eigenvalues"] = rep.eigenvalues;
  std::ofstream f((fs::path(cfg.out_dir) / "gram.json").string());
  f << j.dump(2) << "\n";
  return 0;
}

int cmd_oracle_build(const Common& c, const std::string& which) {
  const ExperimentConfig cfg = resolve(c);
  const std::string dir = !c.out.empty() ? c.out : cfg.base.oracle_dir;
  std::vector<std::string> names;
  if (which == "all")
    names = {"burgers", "allencahn"};
  else
    names = {which};
  fs::create_directories(dir);
  for (const std::string& name : names) {
    const PdeProblem problem = make_problem(name);
    const OracleGrid grid = build_oracle(problem);
    const std::string path = (fs::path(dir) / (name + ".csv")).string();
    grid.save(path);
    std::cout << "wrote " << path << " (" << grid.nx << "x" << grid.nt << ", "
              << grid.method << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature-engineered physics-informed PDE benchmark"};
  app.require_subcommand(1);

  Common c_train, c_sweep, c_eval, c_spec, c_gram, c_oracle;
  std::string eval_ckpt, gram_ckpt, oracle_which = "all";
  std::vector<std::string> spec_ckpts;
  int slq_probes = 100, slq_steps = 200, gram_points = 0;

  CLI::App* t = app.add_subcommand("train", "train the first configured run");
  add_common(t, c_train);
  CLI::App* s = app.add_subcommand("sweep", "run the full config matrix");
  add_common(s, c_sweep);
  CLI::App* ev = app.add_subcommand("evaluate", "L2RE of a saved checkpoint");
  add_common(ev, c_eval);
  ev->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
  CLI::App* sp = app.add_subcommand("spectral", "Hessian spectral density (SLQ)");
  add_common(sp, c_spec);
  sp->add_option("--checkpoints", spec_ckpts, "checkpoints to analyze (default: train)");
  sp->add_option("--probes", slq_probes, "number of probe vectors");
  sp->add_option("--steps", slq_steps, "Lanczos steps per probe");
  CLI::App* g = app.add_subcommand("gram-check", "feature Gram conditioning");
  add_common(g, c_gram);
  g->add_option("--checkpoint", gram_ckpt, "read frequencies/amplitudes from a checkpoint");
  g->add_option("--grid", gram_points, "points per grid axis (0 = auto)");
  CLI::App* ob = app.add_subcommand("oracle-build", "precompute numerical references");
  add_common(ob, c_oracle);
  ob->add_option("--problem", oracle_which, "burgers, allencahn, or all")
      ->check(CLI::IsMember({"burgers", "allencahn", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (t->parsed()) return cmd_train(c_train);
    if (s->parsed()) return cmd_sweep(c_sweep);
    if (ev->parsed()) return cmd_evaluate(c_eval, eval_ckpt);
    if (sp->parsed()) return cmd_spectral(c_spec, spec_ckpts, slq_probes, slq_steps);
    if (g->parsed()) return cmd_gram(c_gram, gram_ckpt, gram_points);
    if (ob->parsed()) return cmd_oracle_build(c_oracle, oracle_which);
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const MissingOracle& ex) {
    std::cerr << "missing oracle: " << ex.what()
              << " (run `pinnbench oracle-build` first)\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
