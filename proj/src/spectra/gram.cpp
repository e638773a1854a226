#include "fepinn/spectra/gram.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace fepinn {
namespace {

constexpr double kPi = 3.14159265358979323846;

double axis_period(double fundamental, double extent) {
  if (std::abs(fundamental) < 1e-12) return extent;
  return 2.0 * kPi / std::abs(fundamental);
}

}  // namespace

GramReport gram_conditioning(const PdeProblem& problem, const FeatureBank& bank,
                             int points_per_axis) {
  GramReport rep;
  const int w = bank.fourier_width();
  rep.width = w;
  const int n_ax = points_per_axis > 0 ? points_per_axis : std::max(4 * bank.n_sets, 32);
  rep.points_per_axis = n_ax;

  const DomainBox& box = problem.box;
  const bool two_d = bank.space_dim == 2;
  const double px = axis_period(bank.omega_x.empty() ? 0.0 : bank.omega_x[0],
                                box.x_hi - box.x_lo);
  const double py = two_d ? axis_period(bank.omega_y.empty() ? 0.0 : bank.omega_y[0],
                                        box.y_hi - box.y_lo)
                          : 0.0;
  const double pt = axis_period(bank.lambda_t.empty() ? 0.0 : bank.lambda_t[0],
                                box.t_hi - box.t_lo);

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(w, w);
  long n_points = 0;
  const int n_y = two_d ? n_ax : 1;
  for (int ix = 0; ix < n_ax; ++ix) {
    const double x = box.x_lo + px * ix / n_ax;
    for (int iy = 0; iy < n_y; ++iy) {
      const double y = two_d ? box.y_lo + py * iy / n_ax : 0.0;
      for (int it = 0; it < n_ax; ++it) {
        const double t = box.t_lo + pt * it / n_ax;
        const std::vector<double> phi = fourier_features(bank, x, y, t);
        for (int i = 0; i < w; ++i)
          for (int j = i; j < w; ++j) g(i, j) += phi[i] * phi[j];
        ++n_points;
      }
    }
  }
  rep.n_points = n_points;
  for (int i = 0; i < w; ++i)
    for (int j = i; j < w; ++j) {
      g(i, j) /= static_cast<double>(n_points);
      g(j, i) = g(i, j);
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  rep.eigenvalues.resize(w);
  for (int i = 0; i < w; ++i) rep.eigenvalues[i] = es.eigenvalues()(i);
  rep.eig_min = rep.eigenvalues.front();
  rep.eig_max = rep.eigenvalues.back();

  const double rank_cut = 1e-10 * std::max(rep.eig_max, 0.0);
  double nz_min = std::numeric_limits<double>::infinity();
  for (double e : rep.eigenvalues)
    if (e > rank_cut) nz_min = std::min(nz_min, e);
  rep.singular = !(rep.eig_min > rank_cut);
  rep.cond = rep.singular ? std::numeric_limits<double>::infinity()
                          : rep.eig_max / rep.eig_min;
  rep.nonzero_ratio = std::isfinite(nz_min) ? rep.eig_max / nz_min
                                            : std::numeric_limits<double>::infinity();

  // condition number of the correlation-normalized Gram (unit diagonal)
  bool bad_diag = false;
  Eigen::VectorXd d(w);
  for (int i = 0; i < w; ++i) {
    if (!(g(i, i) > 0.0)) {
      bad_diag = true;
      break;
    }
    d(i) = 1.0 / std::sqrt(g(i, i));
  }
  if (bad_diag) {
    rep.cond_scaled = std::numeric_limits<double>::infinity();
  } else {
    Eigen::MatrixXd s = d.asDiagonal() * g * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(s);
    const double lo = es2.eigenvalues()(0), hi = es2.eigenvalues()(w - 1);
    rep.cond_scaled = lo > 1e-10 * std::max(hi, 0.0)
                          ? hi / lo
                          : std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace fepinn
