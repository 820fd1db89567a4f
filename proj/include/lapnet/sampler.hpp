#pragma once

// Data-generating process: Gaussian injections x, potentials y = L*^{-1} x.

#include <cstdint>

#include <Eigen/Core>

#include "lapnet/netmodel.hpp"

namespace lapnet {

/// N = floor(tau * d^2 * ln p), at least 2.
int sample_size(double tau, int d, int p);

/// Inverse covariance of the injections.
class InjectionModel {
 public:
  static InjectionModel identity(int p);
  static InjectionModel scalar(int p, double sigma2);
  /// Throws NotPositiveDefinite unless `theta_x` is symmetric PD.
  static InjectionModel general(const Eigen::MatrixXd& theta_x);

  int dim() const { return static_cast<int>(theta_x_.rows()); }
  const Eigen::MatrixXd& theta_x() const { return theta_x_; }
  bool is_scalar() const { return scalar_; }
  /// sigma^2 when is_scalar().
  double sigma2() const { return sigma2_; }

 private:
  InjectionModel(Eigen::MatrixXd theta_x, bool scalar, double sigma2)
      : theta_x_(std::move(theta_x)), scalar_(scalar), sigma2_(sigma2) {}

  Eigen::MatrixXd theta_x_;
  bool scalar_;
  double sigma2_;
};

/// p x N matrix whose columns are the samples y_t.
using DataMatrix = Eigen::MatrixXd;

DataMatrix simulate_potentials(const GroundTruth& truth,
                               const InjectionModel& inj, int n_samples,
                               std::uint64_t seed);

/// S = Y Y^T / N, symmetrized.
Eigen::MatrixXd sample_covariance(const DataMatrix& y);

}  // namespace lapnet
