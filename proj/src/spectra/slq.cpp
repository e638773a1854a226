#include "fepinn/spectra/slq.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fepinn/core/rng.hpp"

namespace fepinn {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SlqResult slq_spectrum(const LinOp& av, int n, const SlqOptions& opt) {
  SlqResult res;
  res.n_probes = opt.n_probes;
  Rng rng(derive_seed(opt.seed, "slq-probe"));
  const int m = std::min(opt.steps, n);

  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta, w(n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  for (int p = 0; p < opt.n_probes; ++p) {
    V.assign(1, std::vector<double>(n));
    for (double& x : V[0]) x = rng.normal();
    const double nrm = std::sqrt(dot(V[0], V[0]));
    for (double& x : V[0]) x /= nrm;

    alpha.clear();
    beta.clear();
    for (int j = 0; j < m; ++j) {
      av(V[j], w);
      const double a = dot(V[j], w);
      alpha.push_back(a);
      for (int k = 0; k < n; ++k) w[k] -= a * V[j][k];
      if (j > 0)
        for (int k = 0; k < n; ++k) w[k] -= beta[j - 1] * V[j - 1][k];
      // full reorthogonalization, two sweeps of modified Gram-Schmidt
      for (int sweep = 0; sweep < 2; ++sweep)
        for (const auto& v : V) {
          const double c = dot(v, w);
          for (int k = 0; k < n; ++k) w[k] -= c * v[k];
        }
      const double b = std::sqrt(dot(w, w));
      if (j + 1 == m || b < opt.breakdown_tol) break;
      beta.push_back(b);
      V.push_back(w);
      for (double& x : V.back()) x /= b;
    }

    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    double wsum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double node = es.eigenvalues()(i);
      const double tau = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
      res.nodes.push_back({node, tau, p});
      wsum += tau;
      lo = std::min(lo, node);
      hi = std::max(hi, node);
    }
    res.max_weight_sum_err = std::max(res.max_weight_sum_err, std::abs(wsum - 1.0));
  }

  res.lambda_min = lo;
  res.lambda_max = hi;
  return res;
}

std::vector<std::pair<double, double>> smoothed_density(const SlqResult& r, int n_grid,
                                                        double rel_bandwidth) {
  std::vector<std::pair<double, double>> out;
  if (r.nodes.empty() || n_grid < 2) return out;
  const double span = std::max(r.lambda_max - r.lambda_min, 1e-300);
  const double sigma = rel_bandwidth * span;
  const double pad = 3.0 * sigma;
  const double lo = r.lambda_min - pad, hi = r.lambda_max + pad;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::acos(-1.0)) * r.n_probes);
  out.resize(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double x = lo + (hi - lo) * i / (n_grid - 1);
    double f = 0.0;
    for (const SlqNode& nd : r.nodes) {
      const double z = (x - nd.node) / sigma;
      f += nd.weight * std::exp(-0.5 * z * z);
    }
    out[i] = {x, f * norm};
  }
  return out;
}

std::vector<double> dense_eigenvalues(const LinOp& av, int n) {
  Eigen::MatrixXd A(n, n);
  std::vector<double> e(n, 0.0), col(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    av(e, col);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) A(i, j) = col[i];
  }
  // symmetrize to scrub roundoff asymmetry from the column probes
  Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

}  // namespace fepinn
