#include "fepinn/pde/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fepinn/core/errors.hpp"

namespace fepinn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double closed_form_value(ProblemId id, double x, double y, double t) {
  switch (id) {
    case ProblemId::Wave:
      return std::sin(kPi * x) * std::cos(2.0 * kPi * t) +
             0.5 * std::sin(4.0 * kPi * x) * std::cos(8.0 * kPi * t);
    case ProblemId::Reaction: {
      const double s = kPi / 4.0;
      const double d = x - kPi;
      const double h = std::exp(-d * d / (2.0 * s * s));
      const double e = h * std::exp(5.0 * t);
      return e / (e + 1.0 - h);
    }
    case ProblemId::Convection:
      return std::sin(x - 0.1 * t);
    case ProblemId::Diffusion:
      return std::exp(-t) * std::sin(kPi * x);
    case ProblemId::Heat2D: {
      const double kappa = 400.0 / 250000.0 + 1.0;  // (20pi)^2 kx + pi^2 ky
      return std::sin(20.0 * kPi * x) * std::sin(kPi * y) * std::exp(-kappa * t);
    }
    case ProblemId::NonHomogHeat:
      return std::sin(2.0 * kPi * x) * std::cos(kPi * t) +
             0.6 * std::sin(6.3 * kPi * x) * std::sin(3.0 * kPi * t) + 0.5 * x + 1.0;
    default:
      throw MissingOracle("no closed-form solution for this problem");
  }
}

double OracleGrid::interp(double x, double t) const {
  const double fx = (x - x_lo) / (x_hi - x_lo) * (nx - 1);
  const double ft = (t - t_lo) / (t_hi - t_lo) * (nt - 1);
  int ix = static_cast<int>(std::floor(fx));
  int it = static_cast<int>(std::floor(ft));
  ix = std::clamp(ix, 0, nx - 2);
  it = std::clamp(it, 0, nt - 2);
  const double ax = fx - ix;
  const double at_ = ft - it;
  // Exact-at-node property: when x (resp. t) is a node, ax (resp. at_) is an
  // exact 0 or 1 only if fx is integral; guard the common case explicitly so
  // node queries return stored values bit-for-bit.
  if (ax == 0.0 && at_ == 0.0) return at(ix, it);
  const double v00 = at(ix, it), v10 = at(ix + 1, it);
  const double v01 = at(ix, it + 1), v11 = at(ix + 1, it + 1);
  return (1.0 - at_) * ((1.0 - ax) * v00 + ax * v10) + at_ * ((1.0 - ax) * v01 + ax * v11);
}

void OracleGrid::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open oracle file for writing: " + path);
  out << "# oracle-grid v1\n";
  out << "# method," << method << "\n";
  out << "# problem," << problem << "\n";
  out << "# nx," << nx << "\n";
  out << "# nt," << nt << "\n";
  char buf[40];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << "# " << key << "," << buf << "\n";
  };
  put("x_lo", x_lo);
  put("x_hi", x_hi);
  put("t_lo", t_lo);
  put("t_hi", t_hi);
  for (int it = 0; it < nt; ++it) {
    for (int ix = 0; ix < nx; ++ix) {
      std::snprintf(buf, sizeof buf, "%.17g", at(ix, it));
      out << buf << (ix + 1 < nx ? "," : "\n");
    }
  }
}

OracleGrid OracleGrid::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingOracle("oracle grid not found: " + path);
  OracleGrid g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      std::string key = line.substr(2, comma - 2);
      std::string val = line.substr(comma + 1);
      if (key == "method") g.method = val;
      else if (key == "problem") g.problem = val;
      else if (key == "nx") g.nx = std::stoi(val);
      else if (key == "nt") g.nt = std::stoi(val);
      else if (key == "x_lo") g.x_lo = std::stod(val);
      else if (key == "x_hi") g.x_hi = std::stod(val);
      else if (key == "t_lo") g.t_lo = std::stod(val);
      else if (key == "t_hi") g.t_hi = std::stod(val);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) g.values.push_back(std::stod(cell));
  }
  if (g.nx <= 1 || g.nt <= 1 ||
      g.values.size() != static_cast<size_t>(g.nx) * static_cast<size_t>(g.nt))
    throw MissingOracle("oracle grid file is malformed: " + path);
  return g;
}

ReferenceSolution ReferenceSolution::analytic(ProblemId id) {
  ReferenceSolution r;
  r.analytic_ = true;
  r.id_ = id;
  return r;
}

ReferenceSolution ReferenceSolution::from_grid(OracleGrid grid) {
  ReferenceSolution r;
  r.grid_ = std::make_shared<OracleGrid>(std::move(grid));
  return r;
}

double ReferenceSolution::eval(double x, double y, double t) const {
  if (analytic_) return closed_form_value(id_, x, y, t);
  if (!grid_) throw MissingOracle("reference evaluation requested but no oracle grid is attached");
  return grid_->interp(x, t);
}

ReferenceSolution make_reference(const PdeProblem& problem, const std::string& oracle_path) {
  if (problem.closed_form) return ReferenceSolution::analytic(problem.id);
  if (oracle_path.empty())
    throw MissingOracle("problem '" + problem.name +
                        "' needs a precomputed oracle grid; run the oracle-build command first");
  return ReferenceSolution::from_grid(OracleGrid::load(oracle_path));
}

}  // namespace fepinn
