#include "lapnet/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "lapnet/errors.hpp"

namespace lapnet {

namespace {

void require_same_dims(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw DataError(std::string(who) + ": expected square matrices of equal size, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " and " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
}

}  // namespace

SupportSet hard_threshold_support(const Eigen::MatrixXd& l_hat, double cutoff) {
  if (!(cutoff >= 0.0)) throw DataError("hard_threshold_support: cutoff must be >= 0");
  if (l_hat.rows() != l_hat.cols())
    throw DataError("hard_threshold_support: matrix must be square");
  const int p = static_cast<int>(l_hat.rows());
  std::vector<SupportSet::Pair> pairs;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < j; ++i) {
      const double v = std::abs(l_hat(i, j));
      // With cutoff 0 the exact nonzero pattern is kept.
      if (cutoff == 0.0 ? v != 0.0 : v >= cutoff) pairs.emplace_back(i, j);
    }
  return SupportSet(p, std::move(pairs));
}

Confusion confusion(const SupportSet& est, const SupportSet& truth) {
  if (est.dim() != truth.dim())
    throw DataError("confusion: estimate has dim " + std::to_string(est.dim()) +
                    " but truth has dim " + std::to_string(truth.dim()));
  std::vector<SupportSet::Pair> common;
  std::set_intersection(est.pairs().begin(), est.pairs().end(),
                        truth.pairs().begin(), truth.pairs().end(),
                        std::back_inserter(common));
  Confusion c;
  c.tp = static_cast<long>(common.size());
  c.fp = static_cast<long>(est.size()) - c.tp;
  c.fn = static_cast<long>(truth.size()) - c.tp;
  return c;
}

double f_score(long tp, long fp, long fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw DataError("f_score: negative count");
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * double(tp) / double(denom);
}

double linf_offdiag_error(const Eigen::MatrixXd& l_hat,
                          const Eigen::MatrixXd& l_star) {
  require_same_dims(l_hat, l_star, "linf_offdiag_error");
  Eigen::MatrixXd d = (l_hat - l_star).cwiseAbs();
  d.diagonal().setZero();
  return d.size() == 0 ? 0.0 : d.maxCoeff();
}

double linf_full_error(const Eigen::MatrixXd& l_hat,
                       const Eigen::MatrixXd& l_star) {
  require_same_dims(l_hat, l_star, "linf_full_error");
  return (l_hat - l_star).cwiseAbs().maxCoeff();
}

ScoreCard score(const Eigen::MatrixXd& l_hat, const Eigen::MatrixXd& l_star,
                const SupportSet& truth, double cutoff) {
  const Confusion c = confusion(hard_threshold_support(l_hat, cutoff), truth);
  ScoreCard out;
  out.tp = c.tp;
  out.fp = c.fp;
  out.fn = c.fn;
  // An empty truth recovered as empty counts as perfect recovery.
  out.f_score = (c.tp == 0 && c.fp == 0 && c.fn == 0) ? 1.0 : f_score(c.tp, c.fp, c.fn);
  out.linf_offdiag = linf_offdiag_error(l_hat, l_star);
  out.linf_full = linf_full_error(l_hat, l_star);
  return out;
}

}  // namespace lapnet
