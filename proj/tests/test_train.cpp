#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "fepinn/core/errors.hpp"
#include "fepinn/model/model.hpp"
#include "fepinn/pde/problem.hpp"
#include "fepinn/train/loss.hpp"
#include "fepinn/train/optim.hpp"
#include "fepinn/train/sampling.hpp"
#include "fepinn/train/schedule.hpp"
#include "fepinn/train/trainer.hpp"

using namespace fepinn;

namespace {

constexpr double kPi = 3.14159265358979323846;

ModelSpec tiny_spec(Method m, const PdeProblem& prob, int n_features, std::uint64_t seed) {
  ModelOptions o;
  o.n_features = n_features;
  return make_model_spec(m, prob, o, seed);
}

bool inside(const DomainBox& box, double x, double y, double t) {
  if (x < box.x_lo || x > box.x_hi) return false;
  if (t < box.t_lo || t > box.t_hi) return false;
  if (box.space_dim == 2 && (y < box.y_lo || y > box.y_hi)) return false;
  return true;
}

}  // namespace

TEST_CASE("sampling: deterministic, in bounds, with the documented point counts") {
  const PdeProblem wave = make_problem(ProblemId::Wave);
  const TrainingSet a = sample_training_set(wave, 100, 7, 5, 42);
  const TrainingSet b = sample_training_set(wave, 100, 7, 5, 42);
  const TrainingSet c = sample_training_set(wave, 100, 7, 5, 43);

  CHECK(a.interior.size() == 100);
  // Two Dirichlet boundary entries (x = 0 and x = 1), 7 points each.
  CHECK(a.bc.size() == 14);
  // Two initial-condition entries (value and time derivative) on 5 shared
  // locations each.
  CHECK(a.ic.size() == 10);
  const auto values = std::count_if(a.ic.begin(), a.ic.end(),
                                    [](const IcConstraint& k) { return k.order == IcOrder::Value; });
  CHECK(values == 5);

  for (const auto& p : a.interior) CHECK(inside(wave.box, p.x, p.y, p.t));
  for (const auto& k : a.bc) {
    CHECK((k.x == wave.box.x_lo || k.x == wave.box.x_hi));
    CHECK(k.t >= wave.box.t_lo);
    CHECK(k.t <= wave.box.t_hi);
    CHECK(k.g == 0.0);  // homogeneous Dirichlet
  }

  // Same seed reproduces bitwise; a different seed does not.
  bool same = a.interior.size() == b.interior.size();
  for (size_t i = 0; same && i < a.interior.size(); ++i)
    same = a.interior[i].x == b.interior[i].x && a.interior[i].t == b.interior[i].t;
  CHECK(same);
  bool differs = false;
  for (size_t i = 0; i < a.interior.size() && !differs; ++i)
    differs = a.interior[i].x != c.interior[i].x || a.interior[i].t != c.interior[i].t;
  CHECK(differs);
}

TEST_CASE("sampling: periodic pairs straddle the domain and Robin carries its coefficient") {
  const PdeProblem conv = make_problem(ProblemId::Convection);
  const TrainingSet ts = sample_training_set(conv, 16, 9, 4, 7);
  // One periodic entry -> 9 paired constraints.
  CHECK(ts.bc.size() == 9);
  for (const auto& k : ts.bc) {
    CHECK(k.kind == BcKind::Periodic);
    CHECK(k.x == doctest::Approx(conv.box.x_lo));
    CHECK(k.x2 == doctest::Approx(conv.box.x_hi));
  }
  // Initial condition u(x, 0) = sin(x).
  for (const auto& k : ts.ic) {
    CHECK(k.order == IcOrder::Value);
    CHECK(k.target == doctest::Approx(std::sin(k.x)).epsilon(1e-12));
  }

  const PdeProblem nh = make_problem(ProblemId::NonHomogHeat);
  const TrainingSet th = sample_training_set(nh, 16, 5, 4, 7);
  int robin = 0, dirichlet = 0;
  for (const auto& k : th.bc) {
    if (k.kind == BcKind::Robin) {
      ++robin;
      CHECK(k.robin_h == doctest::Approx(4.0));
      CHECK(k.x == doctest::Approx(nh.box.x_hi));
    } else if (k.kind == BcKind::Dirichlet) {
      ++dirichlet;
      CHECK(k.g == doctest::Approx(1.0));  // u(0, t) = 1
    }
  }
  CHECK(robin == 5);
  CHECK(dirichlet == 5);
}

TEST_CASE("loss: zero-parameter model reproduces the hand-computed weighted terms") {
  // With all parameters zero the network output and every derivative vanish,
  // so each loss term reduces to a quadrature of the problem data alone.
  for (ProblemId id : {ProblemId::Wave, ProblemId::Diffusion, ProblemId::NonHomogHeat}) {
    CAPTURE(static_cast<int>(id));
    const PdeProblem prob = make_problem(id);
    const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 16, 3);
    const TrainingSet ts = sample_training_set(prob, 64, 16, 16, 3);
    LossEvaluator ev(prob, spec, ts);
    const std::vector<double> zero(static_cast<size_t>(ev.n_params()), 0.0);

    const LossWeights w;  // defaults: 1 / 100 / 100
    double res = 0.0;
    for (const auto& p : ts.interior) {
      BundleT<double> u{};  // all zeros
      const double r = pde_residual(prob, u, p.x, p.y, p.t);
      res += r * r;
    }
    res *= w.res / (2.0 * ts.interior.size());

    double bc = 0.0;
    for (const auto& k : ts.bc) {
      // u == 0 on both sides: periodic error 0, Dirichlet/Robin error -g.
      const double e = (k.kind == BcKind::Periodic) ? 0.0 : -k.g;
      bc += e * e;
    }
    bc *= w.bc / (2.0 * ts.bc.size());

    double ic = 0.0;
    for (const auto& k : ts.ic) ic += k.target * k.target;
    ic *= w.ic / (2.0 * ts.ic.size());

    const LossParts parts = ev.loss(zero);
    CHECK(parts.res == doctest::Approx(res).epsilon(1e-12).scale(1.0));
    CHECK(parts.bc == doctest::Approx(bc).epsilon(1e-12).scale(1.0));
    CHECK(parts.ic == doctest::Approx(ic).epsilon(1e-12).scale(1.0));
    CHECK(parts.total == doctest::Approx(res + bc + ic).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("loss: gradient matches central finite differences") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 16, 5);
  const TrainingSet ts = sample_training_set(prob, 48, 12, 12, 5);
  LossEvaluator ev(prob, spec, ts);
  std::vector<double> p = init_params(spec, 5);

  std::vector<double> g;
  ev.loss_grad(p, g);
  REQUIRE(g.size() == p.size());

  const double eps = 1e-6;
  for (size_t i = 0; i < p.size(); i += std::max<size_t>(1, p.size() / 17)) {
    std::vector<double> q = p;
    q[i] = p[i] + eps;
    const double fp = ev.loss(q).total;
    q[i] = p[i] - eps;
    const double fm = ev.loss(q).total;
    const double fd = (fp - fm) / (2.0 * eps);
    CHECK(g[i] == doctest::Approx(fd).epsilon(5e-6).scale(1.0));
  }
}

TEST_CASE("loss: serial and parallel execution agree bitwise") {
  const PdeProblem prob = make_problem(ProblemId::Reaction);
  const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 32, 11);
  const TrainingSet ts = sample_training_set(prob, 700, 60, 60, 11);
  LossEvaluator serial(prob, spec, ts, {}, ExecMode::Serial);
  LossEvaluator parallel(prob, spec, ts, {}, ExecMode::Parallel);
  const std::vector<double> p = init_params(spec, 11);

  std::vector<double> gs, gp;
  const LossParts a = serial.loss_grad(p, gs);
  const LossParts b = parallel.loss_grad(p, gp);
  CHECK(a.total == b.total);
  CHECK(a.res == b.res);
  CHECK(a.bc == b.bc);
  CHECK(a.ic == b.ic);
  REQUIRE(gs.size() == gp.size());
  bool same = true;
  for (size_t i = 0; i < gs.size(); ++i) same = same && gs[i] == gp[i];
  CHECK(same);
}

TEST_CASE("rba: recursion bounds, closed-form max weight, and loss coupling") {
  const PdeProblem prob = make_problem(ProblemId::Diffusion);
  const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 16, 9);
  const TrainingSet ts = sample_training_set(prob, 128, 16, 16, 9);
  LossEvaluator ev(prob, spec, ts);
  const std::vector<double> p = init_params(spec, 9);

  const LossParts before = ev.loss(p);
  ev.enable_rba();  // gamma 0.999, eta 0.01, cap 10
  // Weights start at zero, silencing the residual term entirely.
  const LossParts silenced = ev.loss(p);
  CHECK(silenced.res == 0.0);
  CHECK(silenced.bc == before.bc);
  CHECK(silenced.ic == before.ic);

  const int k = 50;
  for (int i = 0; i < k; ++i) ev.rba_update(p);
  const auto& w = ev.rba_weights();
  REQUIRE(w.size() == ts.interior.size());
  double wmax = 0.0;
  for (double a : w) {
    CHECK(a >= 0.0);
    CHECK(a <= 10.0);
    wmax = std::max(wmax, a);
  }
  // With fixed parameters the argmax residual receives the full increment each
  // step: a_k = eta * (1 - gamma^k) / (1 - gamma).
  const double expect = 0.01 * (1.0 - std::pow(0.999, k)) / (1.0 - 0.999);
  CHECK(wmax == doctest::Approx(expect).epsilon(1e-12));

  // The weighted residual term matches a direct reweighted quadrature.
  std::vector<double> r;
  ev.residuals(p, r);
  double res = 0.0;
  for (size_t i = 0; i < r.size(); ++i) res += (w[i] * r[i]) * (w[i] * r[i]);
  res *= ev.weights().res / (2.0 * r.size());
  const LossParts after = ev.loss(p);
  CHECK(after.res == doctest::Approx(res).epsilon(1e-12));
}

TEST_CASE("ntk: positive traces, balanced weights, and the vanished-trace error") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 16, 13);
  const TrainingSet ts = sample_training_set(prob, 64, 16, 16, 13);
  LossEvaluator ev(prob, spec, ts);
  const std::vector<double> p = init_params(spec, 13);

  const auto [tr_rr, tr_uu] = ev.ntk_traces(p);
  CHECK(tr_rr > 0.0);
  CHECK(tr_uu > 0.0);
  ev.apply_ntk_weights(p);
  const double tr = tr_rr + tr_uu;
  CHECK(ev.weights().res == doctest::Approx(tr / tr_rr).epsilon(1e-12));
  CHECK(ev.weights().bc == doctest::Approx(tr / tr_uu).epsilon(1e-12));
  CHECK(ev.weights().ic == doctest::Approx(ev.weights().bc).epsilon(1e-15));
  // Balanced: each block contributes the same weighted trace.
  CHECK(ev.weights().res * tr_rr == doctest::Approx(ev.weights().bc * tr_uu).epsilon(1e-12));

  // At the zero parameter vector the wave residual has no parameter
  // dependence at all, so the residual-block trace vanishes.
  const std::vector<double> zero(p.size(), 0.0);
  const auto zt = ev.ntk_traces(zero);
  CHECK(zt.first == 0.0);
  CHECK_THROWS_AS(ev.apply_ntk_weights(zero), ZeroTraceError);
}

TEST_CASE("adam: exact first step and the staircase learning-rate decay") {
  AdamOptions o;
  Adam adam(2, o);
  CHECK(adam.current_lr() == doctest::Approx(1e-3).epsilon(1e-15));

  std::vector<double> x = {1.0, -3.0};
  const std::vector<double> g = {0.5, -2.0};
  adam.step(x, g);
  // Bias-corrected first step: x -= lr * g / (|g| + eps).
  CHECK(x[0] == doctest::Approx(1.0 - 1e-3 * 0.5 / (0.5 + 1e-8)).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(-3.0 + 1e-3 * 2.0 / (2.0 + 1e-8)).epsilon(1e-14));

  // lr is constant for the first 2000 steps, then decays by 0.9 per window.
  Adam decayed(1, o);
  std::vector<double> y = {0.0};
  const std::vector<double> gy = {1.0};
  for (int i = 0; i < 2000; ++i) {
    CHECK(decayed.current_lr() == doctest::Approx(1e-3).epsilon(1e-15));
    decayed.step(y, gy);
  }
  CHECK(decayed.current_lr() == doctest::Approx(0.9e-3).epsilon(1e-15));
  for (int i = 0; i < 2000; ++i) decayed.step(y, gy);
  CHECK(decayed.current_lr() == doctest::Approx(0.81e-3).epsilon(1e-15));
  decayed.reset();
  CHECK(decayed.current_lr() == doctest::Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("lbfgs: Rosenbrock to 1e-8 within 200 iterations") {
  auto rosen = [](const std::vector<double>& x, std::vector<double>& g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g = {-2.0 * a - 400.0 * x[0] * b, 200.0 * b};
    return a * a + 100.0 * b * b;
  };
  Lbfgs opt(2, {});
  std::vector<double> x = {-1.2, 1.0};
  std::vector<double> g;
  double f = rosen(x, g);
  int iters = 0;
  while (f >= 1e-8 && iters < 200) {
    const LbfgsStatus st = opt.step(rosen, x, f, g);
    ++iters;
    REQUIRE(st != LbfgsStatus::Diverged);
    if (st == LbfgsStatus::Converged) break;
  }
  CHECK(f < 1e-8);
  CHECK(iters <= 200);
}

TEST_CASE("lbfgs: n=50 strictly convex quadratic converges in at most n+1 iterations") {
  const int n = 50;
  auto quad = [n](const std::vector<double>& x, std::vector<double>& g) {
    g.resize(x.size());
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lam = 1.0 + i;  // spectrum 1..50
      f += 0.5 * lam * x[i] * x[i];
      g[i] = lam * x[i];
    }
    return f;
  };
  LbfgsOptions o;
  o.memory = 50;
  Lbfgs opt(n, o);
  std::vector<double> x(n, 1.0), g;
  double f = quad(x, g);
  int iters = 0;
  while (f >= 1e-10 && iters <= n) {
    opt.step(quad, x, f, g);
    ++iters;
  }
  CHECK(f < 1e-10);
  CHECK(iters <= n + 1);
}

TEST_CASE("schedules: pinned phase expansions") {
  const auto s1_desk = make_schedule(ScheduleKind::S1, 7000);
  REQUIRE(s1_desk.size() == 2);
  CHECK(s1_desk[0].opt == PhaseOpt::Adam);
  CHECK(s1_desk[0].iters == 5000);
  CHECK(s1_desk[1].opt == PhaseOpt::Lbfgs);
  CHECK(s1_desk[1].iters == 2000);

  const auto s1_full = make_schedule(ScheduleKind::S1, 40000);
  CHECK(s1_full[0].iters == 30000);
  CHECK(s1_full[1].iters == 10000);

  const auto s2 = make_schedule(ScheduleKind::S2, 40000);
  REQUIRE(s2.size() == 4);
  CHECK(s2[0].opt == PhaseOpt::Adam);
  CHECK(s2[0].iters == 3000);
  CHECK(s2[1].opt == PhaseOpt::Lbfgs);
  CHECK(s2[1].fill_to == 34000);
  CHECK(s2[1].until_stall);
  CHECK(s2[2].opt == PhaseOpt::Adam);
  CHECK(s2[2].fill_to == 37000);
  CHECK(s2[2].lr_scale == doctest::Approx(0.5));
  CHECK(s2[3].opt == PhaseOpt::Lbfgs);
  CHECK(s2[3].iters == 3000);

  const auto s3a = make_schedule(ScheduleKind::S3a, 40000);
  CHECK(s3a[0].iters == 20000);
  CHECK(s3a[1].iters == 20000);
  const auto s3b = make_schedule(ScheduleKind::S3b, 40000);
  CHECK(s3b[0].iters == 10000);
  CHECK(s3b[1].iters == 30000);
  const auto s3c = make_schedule(ScheduleKind::S3c, 40000);
  CHECK(s3c[0].iters == 5000);
  CHECK(s3c[1].iters == 35000);
  const auto s3d = make_schedule(ScheduleKind::S3d, 40000);
  REQUIRE(s3d.size() == 3);
  CHECK(s3d[0].iters == 25000);
  CHECK(s3d[1].iters == 10000);
  CHECK(s3d[2].iters == 5000);
  const auto s3e = make_schedule(ScheduleKind::S3e, 40000);
  REQUIRE(s3e.size() == 2);
  CHECK(s3e[0].opt == PhaseOpt::Adam);
  CHECK(s3e[0].fill_to == 40000);
  CHECK(s3e[0].plateau_patience == 1000);
  CHECK(s3e[1].opt == PhaseOpt::Lbfgs);
  CHECK(s3e[1].fill_to == 40000);
  const auto s4 = make_schedule(ScheduleKind::S4, 40000);
  REQUIRE(s4.size() == 1);
  CHECK(s4[0].opt == PhaseOpt::Adam);
  CHECK(s4[0].iters == 40000);

  CHECK_THROWS_AS(make_schedule(ScheduleKind::S1, 0), ConfigError);
  for (ScheduleKind k : all_schedules()) CHECK(schedule_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(schedule_from_string("S9"), ConfigError);
}

TEST_CASE("trainer: smoke run logs phases, counts iterations, and reduces the loss") {
  const PdeProblem prob = make_problem(ProblemId::Diffusion);
  const ModelSpec spec = tiny_spec(Method::SAFENET, prob, 16, 1);
  const TrainingSet ts = sample_training_set(prob, 128, 32, 32, 1);
  LossEvaluator ev(prob, spec, ts);

  std::vector<Phase> phases;
  phases.push_back({PhaseOpt::Adam, 60});
  Phase fill{PhaseOpt::Lbfgs};
  fill.fill_to = 80;  // global fill target: 20 more iterations
  phases.push_back(fill);

  TrainOptions opt;
  opt.log_every = 20;
  int calls = 0;
  opt.on_iteration = [&](int) { ++calls; };
  opt.metric = [](const std::vector<double>& p) { return static_cast<double>(p.size()); };

  const std::vector<double> p0 = init_params(spec, 1);
  const TrainResult r = run_schedule(ev, phases, p0, opt);
  CHECK(r.iters_run == 80);
  CHECK(calls == 80);
  CHECK_FALSE(r.diverged);
  CHECK(r.final_loss == doctest::Approx(ev.loss(r.params).total).epsilon(1e-12));
  CHECK(r.final_loss < ev.loss(p0).total);
  CHECK(r.final_l2re == doctest::Approx(static_cast<double>(p0.size())));

  REQUIRE(!r.trajectory.empty());
  CHECK(r.trajectory.back().iter == 80);
  bool saw_adam = false, saw_lbfgs = false;
  for (const auto& row : r.trajectory) {
    CHECK(std::isfinite(row.loss));
    CHECK(row.loss == doctest::Approx(row.res + row.bc + row.ic).epsilon(1e-12).scale(1.0));
    if (row.phase == 0) saw_adam = true;
    if (row.phase == 1) saw_lbfgs = true;
  }
  CHECK(saw_adam);
  CHECK(saw_lbfgs);

  // Byte-determinism of the optimizer path: repeat and compare parameters.
  const TrainResult r2 = run_schedule(ev, phases, p0, opt);
  REQUIRE(r2.params.size() == r.params.size());
  bool same = true;
  for (size_t i = 0; i < r.params.size(); ++i) same = same && r.params[i] == r2.params[i];
  CHECK(same);
  REQUIRE(r2.trajectory.size() == r.trajectory.size());
  for (size_t i = 0; i < r.trajectory.size(); ++i)
    CHECK(r.trajectory[i].loss == r2.trajectory[i].loss);
}
