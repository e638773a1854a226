#include "fepinn/features/feature_bank.hpp"

#include <cmath>

namespace fepinn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FeatureBank make_feature_bank(const PdeProblem& problem, int n_sets, bool normalize,
                              bool use_dkf) {
  FeatureBank bank;
  bank.n_sets = n_sets;
  bank.space_dim = problem.box.space_dim;
  bank.normalize = normalize;
  if (use_dkf) bank.dkf = dkf_list(problem.id);
  bank.omega_x.resize(n_sets);
  bank.lambda_t.resize(n_sets);
  if (bank.space_dim == 2) bank.omega_y.resize(n_sets);
  for (int l = 0; l < n_sets; ++l) {
    bank.omega_x[l] = (l + 1) * kPi / problem.harmonic_kx;
    if (bank.space_dim == 2) bank.omega_y[l] = (l + 1) * kPi / problem.harmonic_ky;
    bank.lambda_t[l] = (l + 1) * kPi / problem.harmonic_kx;
  }
  bank.coeff.assign(static_cast<size_t>(bank.n_combos()) * n_sets, 1.0);
  return bank;
}

std::vector<double> fourier_features(const FeatureBank& bank, double x, double y, double t) {
  const int combos = bank.n_combos();
  std::vector<double> out(static_cast<size_t>(bank.fourier_width()));
  for (int l = 0; l < bank.n_sets; ++l) {
    const double ax = bank.omega_x[l] * x;
    const double at = bank.lambda_t[l] * t;
    const double tx[2] = {std::cos(ax), std::sin(ax)};
    const double tt[2] = {std::cos(at), std::sin(at)};
    if (bank.space_dim == 1) {
      for (int j = 0; j < 4; ++j)
        out[static_cast<size_t>(l) * 4 + j] =
            bank.coeff[static_cast<size_t>(l) * 4 + j] * tx[j & 1] * tt[(j >> 1) & 1];
    } else {
      const double ay = bank.omega_y[l] * y;
      const double ty[2] = {std::cos(ay), std::sin(ay)};
      for (int j = 0; j < 8; ++j)
        out[static_cast<size_t>(l) * 8 + j] = bank.coeff[static_cast<size_t>(l) * 8 + j] *
                                              tx[j & 1] * ty[(j >> 1) & 1] * tt[(j >> 2) & 1];
    }
  }
  return out;
}

std::vector<double> normalize(const std::vector<double>& v, double eps) {
  const size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  std::vector<double> out(n);
  double norm2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    out[i] = v[i] - mean;
    norm2 += out[i] * out[i];
  }
  const double denom = std::sqrt(norm2) + eps;
  for (double& x : out) x /= denom;
  return out;
}

}  // namespace fepinn
