#pragma once

// Edge-recovery scores: hard thresholding, confusion counts, F-score and
// worst-case entry error.

#include <Eigen/Core>

#include "lapnet/support.hpp"

namespace lapnet {

struct Confusion {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct ScoreCard {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double f_score = 0.0;
  double linf_offdiag = 0.0;
  /// Elementwise max over all entries, diagonal included.
  double linf_full = 0.0;
};

/// Pairs (i < j) with |L_ij| >= cutoff.
SupportSet hard_threshold_support(const Eigen::MatrixXd& l_hat, double cutoff);

/// DataError when the dimensions differ.
Confusion confusion(const SupportSet& est, const SupportSet& truth);

/// 2tp / (2tp + fp + fn), 0 when all counts are 0.
double f_score(long tp, long fp, long fn);

/// max_{i != j} |L_hat_ij - L*_ij|.
double linf_offdiag_error(const Eigen::MatrixXd& l_hat,
                          const Eigen::MatrixXd& l_star);

/// max_{i, j} |L_hat_ij - L*_ij|.
double linf_full_error(const Eigen::MatrixXd& l_hat,
                       const Eigen::MatrixXd& l_star);

/// f_score is 1 when both the truth and the recovered support are empty.
ScoreCard score(const Eigen::MatrixXd& l_hat, const Eigen::MatrixXd& l_star,
                const SupportSet& truth, double cutoff);

}  // namespace lapnet
