#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "fepinn/core/errors.hpp"
#include "fepinn/pde/oracle.hpp"
#include "fepinn/pde/problem.hpp"
#include "fepinn/pde/reference.hpp"

using namespace fepinn;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("cole-hopf evaluation: initial condition, odd symmetry, and panel convergence") {
  // t -> 0 recovers u(x, 0) = -sin(pi x): exactly at t = 0, and to O(t)
  // shortly after (|u_t| is bounded by ~pi^2 on this benchmark).
  for (double x : {-0.7, -0.2, 0.35, 0.8}) {
    CHECK(burgers_cole_hopf_value(x, 0.0, 512) == doctest::Approx(-std::sin(kPi * x)));
    CHECK(std::fabs(burgers_cole_hopf_value(x, 1e-3, 512) + std::sin(kPi * x)) < 5e-3);
  }
  // The solution stays odd in x for all times.
  for (double t : {0.2, 0.6, 0.95}) {
    for (double x : {0.15, 0.5, 0.85}) {
      const double up = burgers_cole_hopf_value(x, t, 512);
      const double um = burgers_cole_hopf_value(-x, t, 512);
      CHECK(up == doctest::Approx(-um).epsilon(1e-9).scale(1e-6));
    }
  }
  // Boundary values vanish (homogeneous Dirichlet at x = +-1).
  CHECK(std::fabs(burgers_cole_hopf_value(1.0, 0.5, 512)) < 1e-9);
  CHECK(std::fabs(burgers_cole_hopf_value(-1.0, 0.5, 512)) < 1e-9);
  // Quadrature self-convergence: doubling the panels moves nothing.
  const double coarse = burgers_cole_hopf_value(0.4, 0.55, 512);
  const double fine = burgers_cole_hopf_value(0.4, 0.55, 1024);
  CHECK(std::fabs(coarse - fine) < 1e-8);
  // The sharpening front at x = 0 keeps u negative for x slightly positive.
  CHECK(burgers_cole_hopf_value(0.05, 0.9, 512) < 0.0);
}

TEST_CASE("burgers oracle grid: nodes match pointwise evaluation and the initial row") {
  const PdeProblem prob = make_problem(ProblemId::Burgers);
  OracleBuildOptions opt;
  opt.nx_out = 33;
  opt.nt_out = 5;
  opt.burgers_panels = 512;
  opt.check_convergence = true;
  opt.convergence_tol = 1e-6;
  const OracleGrid g = build_oracle(prob, opt);
  CHECK(g.method == "cole-hopf");
  CHECK(g.nx == 33);
  CHECK(g.nt == 5);
  CHECK(g.x_lo == doctest::Approx(-1.0));
  CHECK(g.x_hi == doctest::Approx(1.0));

  for (int ix = 0; ix < g.nx; ++ix) {
    const double x = g.x_lo + (g.x_hi - g.x_lo) * ix / (g.nx - 1);
    CHECK(g.at(ix, 0) == doctest::Approx(-std::sin(kPi * x)).epsilon(1e-6).scale(1.0));
  }
  // A middle node agrees with an independent pointwise evaluation.
  const double xm = g.x_lo + (g.x_hi - g.x_lo) * 16 / (g.nx - 1);
  const double tm = g.t_lo + (g.t_hi - g.t_lo) * 2 / (g.nt - 1);
  CHECK(g.at(16, 2) == doctest::Approx(burgers_cole_hopf_value(xm, tm, 512)).epsilon(1e-9));
}

TEST_CASE("allen-cahn spectral oracle: initial row and resolution self-convergence") {
  const PdeProblem prob = make_problem(ProblemId::AllenCahn);
  OracleBuildOptions opt;
  opt.nx_out = 33;
  opt.nt_out = 3;
  opt.ac_modes = 512;
  opt.ac_dt = 1e-3;
  opt.check_convergence = false;  // compared manually below
  const OracleGrid g = build_oracle(prob, opt);
  CHECK(g.method == "spectral");
  CHECK(g.x_lo == doctest::Approx(-1.0));
  CHECK(g.x_hi == doctest::Approx(1.0));

  for (int ix = 0; ix < g.nx; ++ix) {
    const double x = g.x_lo + (g.x_hi - g.x_lo) * ix / (g.nx - 1);
    CHECK(g.at(ix, 0) == doctest::Approx(x * x * std::cos(kPi * x)).epsilon(1e-10).scale(1.0));
  }

  OracleBuildOptions fine = opt;
  fine.ac_modes = 1024;
  fine.ac_dt = 5e-4;
  const OracleGrid h = build_oracle(prob, fine);
  double diff = 0.0;
  for (size_t i = 0; i < g.values.size(); ++i)
    diff = std::max(diff, std::fabs(g.values[i] - h.values[i]));
  CHECK(diff < 1e-3);

  // Solution values stay inside the Allen-Cahn band [-1, 1] (up to small
  // spectral ringing near the interfaces).
  for (double v : g.values) {
    CHECK(v <= 1.0 + 1e-2);
    CHECK(v >= -1.0 - 1e-2);
  }
}

TEST_CASE("oracle grids round-trip through disk and interpolate exactly at nodes") {
  const PdeProblem prob = make_problem(ProblemId::Burgers);
  OracleBuildOptions opt;
  opt.nx_out = 17;
  opt.nt_out = 4;
  opt.burgers_panels = 256;
  opt.check_convergence = false;
  const OracleGrid g = build_oracle(prob, opt);

  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "fepinn-oracle-test.bin";
  g.save(path.string());
  const OracleGrid r = OracleGrid::load(path.string());
  fs::remove(path);

  CHECK(r.method == g.method);
  CHECK(r.problem == g.problem);
  CHECK(r.nx == g.nx);
  CHECK(r.nt == g.nt);
  CHECK(r.x_lo == g.x_lo);
  CHECK(r.x_hi == g.x_hi);
  CHECK(r.t_lo == g.t_lo);
  CHECK(r.t_hi == g.t_hi);
  REQUIRE(r.values.size() == g.values.size());
  bool same = true;
  for (size_t i = 0; i < g.values.size(); ++i) same = same && g.values[i] == r.values[i];
  CHECK(same);  // byte-exact payload

  // Bilinear interpolation: exact at nodes, averages at axis midpoints.
  const double dx = (g.x_hi - g.x_lo) / (g.nx - 1);
  const double dt = (g.t_hi - g.t_lo) / (g.nt - 1);
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ix += 4) {
      const double x = g.x_lo + ix * dx;
      const double t = g.t_lo + it * dt;
      CHECK(g.interp(x, t) == doctest::Approx(g.at(ix, it)).epsilon(1e-13).scale(1.0));
    }
  const double mid = g.interp(g.x_lo + 2.5 * dx, g.t_lo + dt);
  CHECK(mid == doctest::Approx(0.5 * (g.at(2, 1) + g.at(3, 1))).epsilon(1e-13).scale(1.0));

  // Reference plumbing: a grid-backed reference evaluates via interpolation
  // and closed-form problems refuse to pretend they have one.
  const ReferenceSolution ref = ReferenceSolution::from_grid(g);
  CHECK_FALSE(ref.is_analytic());
  CHECK(ref.eval(0.25, 0.0, 0.5) == doctest::Approx(g.interp(0.25, 0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(closed_form_value(ProblemId::Burgers, 0.1, 0.0, 0.1), MissingOracle);
}

TEST_CASE("oracle construction rejects closed-form problems and failed convergence") {
  CHECK_THROWS_AS(build_oracle(make_problem(ProblemId::Wave)), ConfigError);

  // Absurdly coarse quadrature cannot satisfy the self-check tolerance.
  const PdeProblem prob = make_problem(ProblemId::Burgers);
  OracleBuildOptions opt;
  opt.nx_out = 17;
  opt.nt_out = 3;
  opt.burgers_panels = 8;
  opt.check_convergence = true;
  opt.convergence_tol = 1e-12;
  CHECK_THROWS_AS(build_oracle(prob, opt), OracleConvergenceFailure);
}
