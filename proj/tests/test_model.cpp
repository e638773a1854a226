#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "fepinn/core/errors.hpp"
#include "fepinn/model/model.hpp"
#include "fepinn/pde/problem.hpp"

using namespace fepinn;

namespace {

int mlp_param_count(int in, int depth, int width) {
  int total = 0, fan = in;
  for (int l = 0; l < depth; ++l) {
    total += width * fan + width;
    fan = width;
  }
  return total + fan + 1;  // linear output row + bias
}

}  // namespace

TEST_CASE("parameter counts match the architecture formulas") {
  const PdeProblem wave = make_problem("wave");

  const ModelSpec pinn = make_model_spec(Method::PINN, wave, {}, 0);
  CHECK(pinn.arch() == Arch::Mlp4x50);
  CHECK(make_layout(pinn).total == mlp_param_count(2, 4, 50));
  CHECK(make_layout(pinn).total == 7851);

  ModelOptions safe_opt;
  safe_opt.n_features = 64;
  const ModelSpec safenet = make_model_spec(Method::SAFENET, wave, safe_opt, 0);
  CHECK(safenet.arch() == Arch::SafeNet);
  CHECK(safenet.bank.n_sets == 16);
  CHECK(safenet.feature_width() == 66);  // 64 fourier + 2 domain features
  // 32 frequencies + 64 amplitudes + one hidden layer on 66 inputs.
  CHECK(make_layout(safenet).total == 32 + 64 + mlp_param_count(66, 1, 50));
  CHECK(make_layout(safenet).total == 3497);

  const ModelSpec fls = make_model_spec(Method::FLS, wave, {}, 0);
  CHECK(fls.arch() == Arch::Fls4x50);
  CHECK(fls.first_act == Activation::Sine);
  CHECK(fls.act == Activation::Tanh);
  CHECK(make_layout(fls).total == make_layout(pinn).total);

  const ModelSpec rff = make_model_spec(Method::RFF, wave, {}, 0);
  CHECK(rff.rff.m == 64);
  CHECK(rff.feature_width() == 128);
  CHECK(make_layout(rff).total == mlp_param_count(128, 4, 50));

  const ModelSpec rbf = make_model_spec(Method::RBF, wave, {}, 0);
  CHECK(rbf.head == HeadKind::KernelSum);
  CHECK(make_layout(rbf).total == 128);
  const ModelSpec rbfp = make_model_spec(Method::RBFP, wave, {}, 0);
  CHECK(make_layout(rbfp).total == 128 + 6);

  // SAFE-NET is the smallest neural model in the lineup.
  CHECK(make_layout(safenet).total < make_layout(pinn).total);
  CHECK(make_layout(safenet).total < make_layout(rff).total);
}

TEST_CASE("rba uses a periodic fourier embedding only on periodic problems") {
  const PdeProblem conv = make_problem("convection");
  const ModelSpec on = make_model_spec(Method::RBA, conv, {}, 0);
  CHECK(on.arch() == Arch::Mlp6x50);
  CHECK(on.frontend == FrontendKind::FourierEmbed);
  CHECK(on.fe_omega == doctest::Approx(1.0).epsilon(1e-15));  // 2 pi / (2 pi)
  CHECK(on.feature_width() == 2 + 2 * on.fe_modes);

  const PdeProblem wave = make_problem("wave");
  const ModelSpec off = make_model_spec(Method::RBA, wave, {}, 0);
  CHECK(off.frontend == FrontendKind::Identity);
  CHECK(off.depth == 6);
  CHECK(off.feature_width() == 2);
}

TEST_CASE("layout segments partition the parameter vector exactly") {
  const PdeProblem wave = make_problem("wave");
  for (Method m : {Method::PINN, Method::FLS, Method::WPINN, Method::RBA, Method::RFF,
                   Method::RBF, Method::RBFP, Method::SAFENET}) {
    ModelOptions opt;
    opt.n_features = 64;
    const ModelSpec spec = make_model_spec(m, wave, opt, 11);
    const ParamLayout layout = make_layout(spec);
    int expect_off = 0;
    for (const ParamSegment& s : layout.segments) {
      CHECK(s.offset == expect_off);
      CHECK(s.size > 0);
      expect_off += s.size;
    }
    CHECK(expect_off == layout.total);
    CHECK(layout.total > 0);
  }
}

TEST_CASE("layout lookup throws on a segment the architecture lacks") {
  const PdeProblem wave = make_problem("wave");
  const ModelSpec pinn = make_model_spec(Method::PINN, wave, {}, 0);
  const ParamLayout layout = make_layout(pinn);
  CHECK(!layout.has("feature-frequencies"));
  CHECK_THROWS_AS(layout.at("feature-frequencies"), ConfigError);
  CHECK(layout.has("W1"));
}

TEST_CASE("default init fills harmonic frequencies, unit amplitudes, zero biases") {
  const PdeProblem wave = make_problem("wave");
  ModelOptions opt;
  opt.n_features = 64;
  const ModelSpec spec = make_model_spec(Method::SAFENET, wave, opt, 3);
  const ParamLayout layout = make_layout(spec);
  const std::vector<double> p = init_params(spec, 3);
  REQUIRE(static_cast<int>(p.size()) == layout.total);

  const int off_f = layout.offset("feature-frequencies");
  for (int l = 0; l < 16; ++l) {
    CHECK(p[off_f + l] == doctest::Approx((l + 1) * 3.14159265358979323846).epsilon(1e-15));
    CHECK(p[off_f + 16 + l] == doctest::Approx(p[off_f + l]).epsilon(1e-15));
  }
  const int off_c = layout.offset("feature-coeffs");
  for (int i = 0; i < layout.size("feature-coeffs"); ++i) CHECK(p[off_c + i] == 1.0);

  // Xavier-uniform bound for the hidden layer, exact zeros for biases.
  const double bound = std::sqrt(6.0 / (66.0 + 50.0));
  const int off_w = layout.offset("W1");
  double max_abs = 0.0;
  for (int i = 0; i < layout.size("W1"); ++i) max_abs = std::max(max_abs, std::fabs(p[off_w + i]));
  CHECK(max_abs <= bound);
  CHECK(max_abs > 0.5 * bound);  // 3300 draws: vanishingly unlikely otherwise
  const int off_b = layout.offset("b1");
  for (int i = 0; i < 50; ++i) CHECK(p[off_b + i] == 0.0);
  CHECK(p[layout.offset("b_out")] == 0.0);
}

TEST_CASE("sine first layers use the uniform(-1/fan_in, 1/fan_in) bound") {
  const PdeProblem wave = make_problem("wave");
  const ModelSpec fls = make_model_spec(Method::FLS, wave, {}, 5);
  const ParamLayout layout = make_layout(fls);
  const std::vector<double> p = init_params(fls, 5);
  const double bound1 = 1.0 / 2.0;  // fan_in = 2 raw coordinates
  const int off1 = layout.offset("W1");
  for (int i = 0; i < layout.size("W1"); ++i) CHECK(std::fabs(p[off1 + i]) <= bound1);
  // Later layers revert to Xavier on 50-50 fans.
  const double bound2 = std::sqrt(6.0 / 100.0);
  const int off2 = layout.offset("W2");
  double max2 = 0.0;
  for (int i = 0; i < layout.size("W2"); ++i) max2 = std::max(max2, std::fabs(p[off2 + i]));
  CHECK(max2 <= bound2);
  // The sine layer fills its wider bound: its largest entry exceeds the
  // Xavier bound of the later layers, distinguishing the two regimes.
  double max1 = 0.0;
  for (int i = 0; i < layout.size("W1"); ++i) max1 = std::max(max1, std::fabs(p[off1 + i]));
  CHECK(max1 > bound2);
}

TEST_CASE("init is deterministic in the seed and alternative strategies differ") {
  const PdeProblem wave = make_problem("wave");
  ModelOptions opt;
  opt.n_features = 32;
  const ModelSpec spec = make_model_spec(Method::SAFENET, wave, opt, 8);
  CHECK(init_params(spec, 8) == init_params(spec, 8));
  CHECK(init_params(spec, 8) != init_params(spec, 9));

  const std::vector<double> gauss = init_params(spec, 8, FreqInit::Gaussian, CoeffInit::Unit);
  const ParamLayout layout = make_layout(spec);
  const int off_f = layout.offset("feature-frequencies");
  bool freq_differs = false;
  const std::vector<double> harm = init_params(spec, 8);
  for (int i = 0; i < layout.size("feature-frequencies"); ++i)
    freq_differs = freq_differs || gauss[off_f + i] != harm[off_f + i];
  CHECK(freq_differs);

  const std::vector<double> xav = init_params(spec, 8, FreqInit::Harmonic, CoeffInit::Xavier);
  const int off_c = layout.offset("feature-coeffs");
  const double cbound = std::sqrt(6.0 / (spec.bank.width() + spec.width));
  for (int i = 0; i < layout.size("feature-coeffs"); ++i) {
    CHECK(std::fabs(xav[off_c + i]) <= cbound);
    CHECK(xav[off_c + i] != 1.0);
  }
}

TEST_CASE("checkpoints round-trip bit-exactly and reject other models") {
  const PdeProblem wave = make_problem("wave");
  ModelOptions opt;
  opt.n_features = 32;
  const ModelSpec spec = make_model_spec(Method::SAFENET, wave, opt, 21);
  const std::vector<double> p = init_params(spec, 21);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fepinn-ckpt-test";
  fs::create_directories(dir);
  const std::string path = (dir / "model.ckpt").string();
  save_checkpoint(path, spec, 21, p);

  std::uint64_t seed = 0;
  const std::vector<double> back = load_checkpoint(path, spec, &seed);
  CHECK(seed == 21);
  REQUIRE(back.size() == p.size());
  for (size_t i = 0; i < p.size(); ++i) CHECK(back[i] == p[i]);
  CHECK(checkpoint_seed(path) == 21);

  // A different architecture (or differently shaped bank) must be rejected.
  const ModelSpec pinn = make_model_spec(Method::PINN, wave, {}, 21);
  CHECK_THROWS_AS(load_checkpoint(path, pinn), ConfigError);
  ModelOptions opt2;
  opt2.n_features = 64;
  const ModelSpec wider = make_model_spec(Method::SAFENET, wave, opt2, 21);
  CHECK_THROWS_AS(load_checkpoint(path, wider), ConfigError);

  // Corrupt magic is refused outright.
  const std::string bad = (dir / "bad.ckpt").string();
  {
    std::FILE* f = std::fopen(bad.c_str(), "wb");
    std::fputs("NOTACKPT........", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(bad, spec), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("describe distinguishes every structural knob used by checkpoints") {
  const PdeProblem wave = make_problem("wave");
  ModelOptions a;
  a.n_features = 64;
  ModelOptions b = a;
  b.normalize = false;
  ModelOptions c = a;
  c.use_dkf = false;
  const std::string da = make_model_spec(Method::SAFENET, wave, a, 0).describe();
  CHECK(da != make_model_spec(Method::SAFENET, wave, b, 0).describe());
  CHECK(da != make_model_spec(Method::SAFENET, wave, c, 0).describe());
  CHECK(da != make_model_spec(Method::PINN, wave, a, 0).describe());
}

TEST_CASE("method names round-trip and unknown names throw") {
  for (Method m : {Method::PINN, Method::FLS, Method::WPINN, Method::RBA, Method::RFF,
                   Method::RBF, Method::RBFP, Method::SAFENET})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("SAFE-NET"), ConfigError);
}
