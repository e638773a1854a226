#include "fepinn/bench/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fepinn/ad/engine.hpp"
#include "fepinn/core/errors.hpp"
#include "fepinn/core/rng.hpp"
#include "fepinn/train/loss.hpp"

namespace fepinn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* to_string(FreqInit f) {
  switch (f) {
    case FreqInit::Harmonic: return "harmonic";
    case FreqInit::Gaussian: return "gaussian";
    case FreqInit::Uniform: return "uniform";
  }
  return "harmonic";
}

FreqInit freq_init_from_string(const std::string& s) {
  if (s == "harmonic") return FreqInit::Harmonic;
  if (s == "gaussian") return FreqInit::Gaussian;
  if (s == "uniform") return FreqInit::Uniform;
  throw ConfigError("unknown frequency init '" + s + "'");
}

const char* to_string(CoeffInit c) {
  switch (c) {
    case CoeffInit::Unit: return "unit";
    case CoeffInit::Gaussian: return "gaussian";
    case CoeffInit::Uniform: return "uniform";
    case CoeffInit::Xavier: return "xavier";
  }
  return "unit";
}

CoeffInit coeff_init_from_string(const std::string& s) {
  if (s == "unit") return CoeffInit::Unit;
  if (s == "gaussian") return CoeffInit::Gaussian;
  if (s == "uniform") return CoeffInit::Uniform;
  if (s == "xavier") return CoeffInit::Xavier;
  throw ConfigError("unknown coefficient init '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string RunSpec::tag() const {
  return problem + "/" + fepinn::to_string(method) + "/" + fepinn::to_string(schedule);
}

std::string RunSpec::slug() const {
  std::ostringstream os;
  os << problem << "_" << fepinn::to_string(method) << "_" << fepinn::to_string(schedule)
     << "_seed" << seed;
  return os.str();
}

std::uint64_t RunSpec::config_hash() const {
  std::ostringstream os;
  os << problem << "|" << fepinn::to_string(method) << "|" << fepinn::to_string(schedule)
     << "|nf=" << model.n_features << "|depth=" << model.depth << "|width=" << model.width
     << "|act=" << fepinn::to_string(model.act) << "|norm=" << model.normalize
     << "|dkf=" << model.use_dkf << "|finit=" << to_string(model.freq_init)
     << "|cinit=" << to_string(model.coeff_init) << "|nres=" << n_res << "|nbc=" << n_bc
     << "|nic=" << n_ic << "|budget=" << budget << "|lr=" << g17(adam_lr)
     << "|log=" << log_every;
  return fnv1a64(os.str());
}

std::vector<RunSpec> ExperimentConfig::expand() const {
  std::vector<RunSpec> out;
  for (const std::string& p : problems)
    for (Method m : methods)
      for (ScheduleKind sch : schedules)
        for (std::uint64_t s : seeds) {
          RunSpec r = base;
          r.problem = p;
          r.method = m;
          r.schedule = sch;
          r.seed = s;
          out.push_back(std::move(r));
        }
  return out;
}

ExperimentConfig desk_preset() {
  ExperimentConfig c;
  c.seeds = {0, 1, 2};
  c.base.model.n_features = 64;
  c.base.n_res = 2000;
  c.base.n_bc = 200;
  c.base.n_ic = 200;
  c.base.budget = 7000;
  return c;
}

ExperimentConfig full_preset() {
  ExperimentConfig c;
  c.seeds = {0, 1, 2, 3, 4};
  c.base.model.n_features = 128;
  c.base.n_res = 20000;
  c.base.n_bc = 2000;
  c.base.n_ic = 2000;
  c.base.budget = 40000;
  return c;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    const std::string preset = j.value("preset", "desk");
    ExperimentConfig c;
    if (preset == "desk")
      c = desk_preset();
    else if (preset == "full")
      c = full_preset();
    else
      throw ConfigError("unknown preset '" + preset + "'");

    auto names = [&](const char* key) -> std::vector<std::string> {
      std::vector<std::string> v;
      if (j.at(key).is_string())
        v.push_back(j.at(key).get<std::string>());
      else
        for (const auto& e : j.at(key)) v.push_back(e.get<std::string>());
      return v;
    };
    if (j.contains("problems")) c.problems = names("problems");
    if (j.contains("problem")) c.problems = {j.at("problem").get<std::string>()};
    if (j.contains("methods")) {
      c.methods.clear();
      for (const std::string& s : names("methods")) c.methods.push_back(method_from_string(s));
    }
    if (j.contains("method")) c.methods = {method_from_string(j.at("method").get<std::string>())};
    if (j.contains("schedules")) {
      c.schedules.clear();
      for (const std::string& s : names("schedules"))
        c.schedules.push_back(schedule_from_string(s));
    }
    if (j.contains("schedule"))
      c.schedules = {schedule_from_string(j.at("schedule").get<std::string>())};
    if (j.contains("seeds")) {
      c.seeds.clear();
      for (const auto& e : j.at("seeds")) c.seeds.push_back(e.get<std::uint64_t>());
    }
    RunSpec& b = c.base;
    b.model.n_features = j.value("n_features", b.model.n_features);
    b.model.depth = j.value("depth", b.model.depth);
    b.model.width = j.value("width", b.model.width);
    if (j.contains("activation"))
      b.model.act = activation_from_string(j.at("activation").get<std::string>());
    b.model.normalize = j.value("normalize", b.model.normalize);
    b.model.use_dkf = j.value("dkf", b.model.use_dkf);
    if (j.contains("freq_init"))
      b.model.freq_init = freq_init_from_string(j.at("freq_init").get<std::string>());
    if (j.contains("coeff_init"))
      b.model.coeff_init = coeff_init_from_string(j.at("coeff_init").get<std::string>());
    b.n_res = j.value("n_res", b.n_res);
    b.n_bc = j.value("n_bc", b.n_bc);
    b.n_ic = j.value("n_ic", b.n_ic);
    b.budget = j.value("budget", b.budget);
    b.adam_lr = j.value("adam_lr", b.adam_lr);
    b.log_every = j.value("log_every", b.log_every);
    b.oracle_dir = j.value("oracle_dir", b.oracle_dir);
    c.out_dir = j.value("out", c.out_dir);

    if (c.problems.empty() || c.methods.empty() || c.schedules.empty() || c.seeds.empty())
      throw ConfigError("problems, methods, schedules and seeds must be non-empty");
    for (const std::string& p : c.problems) make_problem(p);  // validates the name
    if (b.n_res <= 0 || b.n_bc <= 0 || b.n_ic <= 0 || b.budget <= 0 ||
        b.model.n_features <= 0)
      throw ConfigError("point counts, budget and feature count must be positive");
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json_text(ss.str());
}

double l2re(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size())
    throw ConfigError("l2re: prediction and reference sizes differ");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    num += d * d;
    den += truth[i] * truth[i];
  }
  if (den == 0.0) throw ConfigError("l2re: reference vector has zero norm");
  return std::sqrt(num / den);
}

std::vector<double> predict(const ModelSpec& spec, const std::vector<double>& params,
                            const EvalGrid& grid) {
  const size_t nx = grid.xs.size();
  const size_t ny = grid.space_dim == 2 ? grid.ys.size() : 1;
  const size_t nt = grid.ts.size();
  std::vector<double> out(nx * ny * nt);
  const int slices = static_cast<int>(nt);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int it = 0; it < slices; ++it) {
    PointKernel<double, AxesVal> kernel(spec);
    const double t = grid.ts[it];
    size_t idx = static_cast<size_t>(it) * nx * ny;
    for (size_t iy = 0; iy < ny; ++iy) {
      const double y = grid.space_dim == 2 ? grid.ys[iy] : 0.0;
      for (size_t ix = 0; ix < nx; ++ix)
        out[idx++] = kernel.forward(params.data(), grid.xs[ix], y, t).c[0];
    }
  }
  return out;
}

std::vector<double> reference_values(const ReferenceSolution& ref, const EvalGrid& grid) {
  const size_t nx = grid.xs.size();
  const size_t ny = grid.space_dim == 2 ? grid.ys.size() : 1;
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid.ts)
    for (size_t iy = 0; iy < ny; ++iy) {
      const double y = grid.space_dim == 2 ? grid.ys[iy] : 0.0;
      for (double x : grid.xs) out.push_back(ref.eval(x, y, t));
    }
  return out;
}

RunOutcome run_single(const RunSpec& spec) {
  const PdeProblem problem = make_problem(spec.problem);
  const ReferenceSolution ref =
      make_reference(problem, spec.oracle_dir + "/" + problem.name + ".csv");
  const ModelSpec mspec = make_model_spec(spec.method, problem, spec.model, spec.seed);
  std::vector<double> params =
      init_params(mspec, spec.seed, spec.model.freq_init, spec.model.coeff_init);
  const TrainingSet set =
      sample_training_set(problem, spec.n_res, spec.n_bc, spec.n_ic, spec.seed);
  LossEvaluator ev(problem, mspec, set);
  if (spec.method == Method::RBA) ev.enable_rba();

  const EvalGrid grid = make_eval_grid(problem);
  const std::vector<double> truth = reference_values(ref, grid);

  TrainOptions topt;
  topt.adam_lr = spec.adam_lr;
  topt.log_every = spec.log_every;
  topt.use_rba = spec.method == Method::RBA;
  topt.use_ntk = spec.method == Method::WPINN;
  topt.metric = [&mspec, &grid, &truth](const std::vector<double>& p) {
    return l2re(predict(mspec, p, grid), truth);
  };

  RunOutcome out;
  out.spec = spec;
  out.train = run_schedule(ev, make_schedule(spec.schedule, spec.budget), std::move(params),
                           topt);
  return out;
}

std::vector<RunOutcome> run_matrix(const std::vector<RunSpec>& runs, int jobs) {
  std::vector<RunOutcome> out(runs.size());
  jobs = std::max(1, jobs);
  if (jobs == 1 || runs.size() <= 1) {
    for (size_t i = 0; i < runs.size(); ++i) out[i] = run_single(runs[i]);
    return out;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        out[i] = run_single(runs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < std::min<size_t>(jobs, runs.size()); ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

void write_trajectory_csv(const std::string& path, const TrainResult& result) {
  std::ofstream f = open_out(path);
  f << "iter,phase,loss,loss_res,loss_bc,loss_ic,grad_norm,l2re\n";
  for (const IterRow& r : result.trajectory)
    f << r.iter << "," << r.phase << "," << g17(r.loss) << "," << g17(r.res) << ","
      << g17(r.bc) << "," << g17(r.ic) << "," << g17(r.grad_norm) << "," << g17(r.l2re)
      << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_results_csv(const std::string& path, const std::vector<RunOutcome>& rows) {
  std::ofstream f = open_out(path);
  f << "config,problem,method,schedule,seed,l2re,loss,loss_res,loss_bc,loss_ic,iters,"
       "seconds,diverged\n";
  for (const RunOutcome& r : rows) {
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(r.spec.config_hash()));
    const bool div = r.train.diverged;
    const IterRow last = r.train.trajectory.empty() ? IterRow{} : r.train.trajectory.back();
    f << hash << "," << r.spec.problem << "," << to_string(r.spec.method) << ","
      << to_string(r.spec.schedule) << "," << r.spec.seed << ","
      << (div ? "" : g17(r.train.final_l2re)) << "," << (div ? "" : g17(r.train.final_loss))
      << "," << (div ? "" : g17(last.res)) << "," << (div ? "" : g17(last.bc)) << ","
      << (div ? "" : g17(last.ic)) << "," << r.train.iters_run << ","
      << g17(r.train.seconds) << "," << (div ? 1 : 0) << "\n";
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string summary_json(const std::vector<RunOutcome>& rows) {
  struct Cell {
    std::vector<double> done;
    int total = 0;
  };
  std::map<std::string, Cell> cells;
  for (const RunOutcome& r : rows) {
    Cell& c = cells[r.spec.tag()];
    ++c.total;
    if (!r.train.diverged) c.done.push_back(r.train.final_l2re);
  }
  // S1 medians per problem/method, for schedule-improvement percentages
  std::map<std::string, double> s1_median;
  for (const auto& [tag, cell] : cells) {
    const size_t cut = tag.rfind('/');
    if (tag.substr(cut + 1) == "S1" && !cell.done.empty())
      s1_median[tag.substr(0, cut)] = median(cell.done);
  }
  json s;
  for (const auto& [tag, cell] : cells) {
    json e;
    e["seeds"] = cell.total;
    e["count"] = cell.done.size();
    e["diverged"] = cell.total - static_cast<int>(cell.done.size());
    if (cell.done.empty())
      e["median_l2re"] = nullptr;
    else
      e["median_l2re"] = median(cell.done);
    const size_t cut = tag.rfind('/');
    const std::string sched = tag.substr(cut + 1);
    const auto it = s1_median.find(tag.substr(0, cut));
    if (sched != "S1" && it != s1_median.end() && !cell.done.empty() && it->second > 0.0)
      e["improvement_vs_S1_pct"] = (1.0 - median(cell.done) / it->second) * 100.0;
    s[tag] = std::move(e);
  }
  return s.dump(2) + "\n";
}

bool emit_reports(const std::vector<RunOutcome>& rows, const std::string& out_dir) {
  fs::create_directories(fs::path(out_dir) / "runs");
  for (const RunOutcome& r : rows)
    write_trajectory_csv((fs::path(out_dir) / "runs" / (r.spec.slug() + ".csv")).string(),
                         r.train);
  write_results_csv((fs::path(out_dir) / "results.csv").string(), rows);
  std::ofstream f = open_out((fs::path(out_dir) / "summary.json").string());
  f << summary_json(rows);
  if (!f) throw std::runtime_error("write failed: " + (fs::path(out_dir) / "summary.json").string());
  bool all_ok = true;
  for (const RunOutcome& r : rows) all_ok = all_ok && !r.train.diverged;
  return all_ok;
}

}  // namespace fepinn
