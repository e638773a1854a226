#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fepinn/features/feature_bank.hpp"
#include "fepinn/model/model.hpp"
#include "fepinn/pde/problem.hpp"
#include "fepinn/spectra/gram.hpp"
#include "fepinn/spectra/slq.hpp"
#include "fepinn/train/loss.hpp"
#include "fepinn/train/sampling.hpp"

using namespace fepinn;

namespace {

LinOp diag_op(const std::vector<double>& d) {
  return [d](const std::vector<double>& v, std::vector<double>& out) {
    for (size_t i = 0; i < v.size(); ++i) out[i] = d[i] * v[i];
  };
}

}  // namespace

TEST_CASE("slq recovers the spectrum of a diagonal operator") {
  const int n = 60;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = 1.0 + i;  // spectrum 1..60

  SlqOptions opt;
  opt.n_probes = 12;
  opt.steps = 80;  // > n: Lanczos with reorthogonalization resolves everything
  opt.seed = 3;
  const SlqResult r = slq_spectrum(diag_op(d), n, opt);

  CHECK(r.n_probes == 12);
  CHECK(r.lambda_max == doctest::Approx(60.0).epsilon(1e-8));
  CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.max_weight_sum_err <= 1e-8);

  // Every Ritz node sits on an eigenvalue (the spectrum is fully resolved),
  // and the first-moment estimate matches tr(A)/n = 30.5.
  double mean = 0.0;
  for (const SlqNode& nd : r.nodes) {
    const double nearest = std::round(nd.node);
    CHECK(nd.node == doctest::Approx(nearest).epsilon(1e-7).scale(1.0));
    CHECK(nearest >= 1.0);
    CHECK(nearest <= 60.0);
    CHECK(nd.weight >= -1e-12);
    mean += nd.weight * nd.node;
  }
  mean /= r.n_probes;
  CHECK(mean == doctest::Approx(30.5).epsilon(0.05));
}

TEST_CASE("dense eigenvalue reference reproduces a known spectrum in order") {
  const int n = 24;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = 0.5 * (i + 1);
  const std::vector<double> e = dense_eigenvalues(diag_op(d), n);
  REQUIRE(static_cast<int>(e.size()) == n);
  for (int i = 0; i < n; ++i) CHECK(e[i] == doctest::Approx(0.5 * (i + 1)).epsilon(1e-12));
  CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("smoothed density is nonnegative and integrates to one") {
  const int n = 40;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = (i < 20) ? 1.0 : 9.0;  // two clusters
  SlqOptions opt;
  opt.n_probes = 8;
  opt.steps = 60;
  opt.seed = 5;
  const SlqResult r = slq_spectrum(diag_op(d), n, opt);
  const auto dens = smoothed_density(r, 1024, 0.01);
  REQUIRE(dens.size() == 1024);
  double integral = 0.0;
  for (size_t i = 1; i < dens.size(); ++i) {
    CHECK(dens[i].second >= 0.0);
    integral +=
        0.5 * (dens[i].second + dens[i - 1].second) * (dens[i].first - dens[i - 1].first);
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("slq lambda_max matches the dense Hessian on a small network") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  ModelOptions mo;
  mo.n_features = 4;  // one Fourier set -> ~400 parameters
  const ModelSpec spec = make_model_spec(Method::SAFENET, prob, mo, 17);
  const TrainingSet ts = sample_training_set(prob, 96, 24, 24, 17);
  LossEvaluator ev(prob, spec, ts);
  std::vector<double> p = init_params(spec, 17);
  const int n = ev.n_params();
  REQUIRE(n <= 500);

  LinOp hess = [&](const std::vector<double>& v, std::vector<double>& out) {
    ev.hvp(p, v, out);
  };
  const std::vector<double> dense = dense_eigenvalues(hess, n);
  const double dense_max = dense.back();
  REQUIRE(dense_max > 0.0);

  SlqOptions opt;
  opt.n_probes = 6;
  opt.steps = 120;
  opt.seed = 29;
  const SlqResult r = slq_spectrum(hess, n, opt);
  CHECK(std::fabs(r.lambda_max - dense_max) / dense_max < 0.05);
  CHECK(r.max_weight_sum_err <= 1e-8);
}

TEST_CASE("gram matrix of the harmonic unit-coefficient bank is perfectly conditioned") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  const FeatureBank bank = make_feature_bank(prob, 8, true, false);
  const GramReport rep = gram_conditioning(prob, bank);
  REQUIRE(rep.width == 32);
  REQUIRE_FALSE(rep.singular);
  CHECK(rep.cond <= 1.0 + 1e-6);
  CHECK(rep.cond >= 1.0);
  CHECK(rep.nonzero_ratio <= 1.0 + 1e-6);
}

TEST_CASE("doubling one amplitude scales its gram eigenvalue by four") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  FeatureBank bank = make_feature_bank(prob, 8, true, false);
  bank.coeff[0] = 2.0;
  const GramReport rep = gram_conditioning(prob, bank);
  REQUIRE_FALSE(rep.singular);
  CHECK(rep.nonzero_ratio == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(rep.cond == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("duplicated frequency sets are reported singular") {
  const PdeProblem prob = make_problem(ProblemId::Wave);
  FeatureBank bank = make_feature_bank(prob, 4, true, false);
  bank.omega_x[1] = bank.omega_x[0];
  bank.lambda_t[1] = bank.lambda_t[0];  // feature set 1 duplicates set 0
  const GramReport rep = gram_conditioning(prob, bank);
  CHECK(rep.singular);
  CHECK(std::isinf(rep.cond));
  // The collapse removes exactly the four duplicated directions.
  int tiny = 0;
  for (double e : rep.eigenvalues)
    if (e < 1e-10 * rep.eig_max) ++tiny;
  CHECK(tiny == 4);
}
