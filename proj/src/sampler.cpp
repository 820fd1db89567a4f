#include "lapnet/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "lapnet/errors.hpp"
#include "lapnet/matrixcore.hpp"
#include "lapnet/rng.hpp"

namespace lapnet {

int sample_size(double tau, int d, int p) {
  if (!(tau > 0.0)) throw DataError("sample_size: tau must be > 0");
  if (d < 1) throw DataError("sample_size: d must be >= 1");
  if (p < 2) throw DataError("sample_size: p must be >= 2");
  const double n = std::floor(tau * double(d) * double(d) * std::log(double(p)));
  return std::max(2, static_cast<int>(n));
}

InjectionModel InjectionModel::identity(int p) {
  if (p < 1) throw DataError("InjectionModel: p must be >= 1");
  return InjectionModel(Eigen::MatrixXd::Identity(p, p), true, 1.0);
}

InjectionModel InjectionModel::scalar(int p, double sigma2) {
  if (p < 1) throw DataError("InjectionModel: p must be >= 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw NotPositiveDefinite("InjectionModel: sigma2 must be > 0", sigma2);
  return InjectionModel(sigma2 * Eigen::MatrixXd::Identity(p, p), true, sigma2);
}

InjectionModel InjectionModel::general(const Eigen::MatrixXd& theta_x) {
  const auto check = chol_or_min_eig(theta_x);
  if (!check.positive_definite)
    throw NotPositiveDefinite("InjectionModel: theta_x is not positive definite",
                              check.min_eigenvalue);
  return InjectionModel(symmetrize(theta_x), false, 0.0);
}

DataMatrix simulate_potentials(const GroundTruth& truth,
                               const InjectionModel& inj, int n_samples,
                               std::uint64_t seed) {
  const auto p = truth.laplacian.rows();
  if (n_samples < 1) throw DataError("simulate_potentials: N must be >= 1");
  if (inj.dim() != p)
    throw DataError("simulate_potentials: theta_x is " +
                    std::to_string(inj.dim()) + "x" + std::to_string(inj.dim()) +
                    " but the network has p=" + std::to_string(p));
  Eigen::LLT<Eigen::MatrixXd> llt(truth.laplacian);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("simulate_potentials: L* is not positive definite",
                              sym_eigenvalues(truth.laplacian)(0));

  Rng rng(seed);
  Eigen::MatrixXd z(p, n_samples);
  for (int t = 0; t < n_samples; ++t)
    for (Eigen::Index i = 0; i < p; ++i) z(i, t) = rng.normal();

  Eigen::MatrixXd x;
  if (inj.is_scalar())
    x = z / std::sqrt(inj.sigma2());
  else
    x = spd_inv_sqrt(inj.theta_x()) * z;
  return llt.solve(x);
}

Eigen::MatrixXd sample_covariance(const DataMatrix& y) {
  if (y.cols() < 1) throw DataError("sample_covariance: need N >= 1 samples");
  Eigen::MatrixXd s = (y * y.transpose()) / double(y.cols());
  return symmetrize(s);
}

}  // namespace lapnet
