#pragma once

// Active-set Newton refinement of an l1-penalized log-det estimate.
//
// The off-diagonal entries of the starting point fix an active set with
// signs. On that orthant the objective is smooth, so Newton's method with a
// dense Hessian over the free entries converges quadratically. After each
// inner solve, entries that reached zero leave the set and inactive entries
// whose gradient exceeds lambda enter it.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lapnet/matrixcore.hpp"

namespace lapnet {

struct PolishOptions {
  int max_rounds = 20;
  int max_newton_iters = 50;
  int max_halvings = 50;
  /// Newton stops once the largest gradient entry is below this.
  double gradient_tol = 1e-12;
  /// Active sets larger than this (diagonal included) are not attempted.
  int max_variables = 2500;
};

template <typename Scalar>
struct PolishResult {
  SymMatrix<Scalar> estimate;
  bool ok = false;
  int rounds = 0;
  int newton_iters = 0;
  std::string message;
};

namespace detail {

/// phi(L) = Tr(S L L) - 2 logdet L + lambda sum_{i != j} |L_ij|, or +inf
/// when L is not PD. Also returns W = L^{-1} when requested.
template <typename Scalar>
Scalar penalized_objective_or_inf(const Matrix<Scalar>& l,
                                  const Matrix<Scalar>& s, Scalar lambda,
                                  Matrix<Scalar>* w_out) {
  Eigen::LLT<Matrix<Scalar>> llt(l);
  if (llt.info() != Eigen::Success) return std::numeric_limits<Scalar>::infinity();
  const Matrix<Scalar> lower = llt.matrixL();
  const auto d = lower.diagonal();
  if (!(d.minCoeff() > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  const Scalar logdet = Scalar(2) * d.array().log().sum();
  const Scalar tr = (s * l).cwiseProduct(l.transpose()).sum();
  const Scalar l1 = l.cwiseAbs().sum() - l.diagonal().cwiseAbs().sum();
  if (w_out != nullptr)
    *w_out = symmetrize(llt.solve(Matrix<Scalar>::Identity(l.rows(), l.cols())));
  return tr - Scalar(2) * logdet + lambda * l1;
}

}  // namespace detail

/// Refines `start` (symmetric PD) for the penalized objective. The initial
/// active set is the off-diagonal nonzero pattern of `start`, with its signs.
/// Returns ok=false (and the start) if the refinement cannot proceed.
template <typename DS, typename DL>
PolishResult<typename DS::Scalar> polish_active_set(
    const Eigen::MatrixBase<DS>& s_in, typename DS::Scalar lambda,
    const Eigen::MatrixBase<DL>& start, const PolishOptions& opt = {}) {
  using Scalar = typename DS::Scalar;
  using Mat = Matrix<Scalar>;
  const Mat s = symmetrize(s_in);
  const Eigen::Index p = s.rows();

  PolishResult<Scalar> out;
  out.estimate = symmetrize(start);
  Mat x = out.estimate;

  struct Var {
    Eigen::Index i, j;
    Scalar sign;  // 0 on the diagonal
  };
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  std::vector<Scalar> signs;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (x(i, j) != Scalar(0)) {
        pairs.emplace_back(i, j);
        signs.push_back(x(i, j) > Scalar(0) ? Scalar(1) : Scalar(-1));
      }

  Mat w;
  for (int round = 0; round < opt.max_rounds; ++round) {
    out.rounds = round + 1;
    std::vector<Var> vars;
    vars.reserve(static_cast<std::size_t>(p) + pairs.size());
    for (Eigen::Index i = 0; i < p; ++i) vars.push_back({i, i, Scalar(0)});
    for (std::size_t k = 0; k < pairs.size(); ++k)
      vars.push_back({pairs[k].first, pairs[k].second, signs[k]});
    const auto m = static_cast<Eigen::Index>(vars.size());
    if (m > opt.max_variables) {
      out.message = "active set too large";
      return out;
    }

    Scalar f = detail::penalized_objective_or_inf(x, s, lambda, &w);
    if (!std::isfinite(f)) {
      out.message = "iterate lost positive definiteness";
      return out;
    }

    for (int it = 0; it < opt.max_newton_iters; ++it) {
      const Mat g_full = s * x + x * s - Scalar(2) * w;
      Vector<Scalar> g(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        const Var& v = vars[static_cast<std::size_t>(a)];
        g(a) = v.i == v.j ? g_full(v.i, v.i)
                          : g_full(v.i, v.j) + g_full(v.j, v.i) +
                                Scalar(2) * lambda * v.sign;
      }
      if (g.cwiseAbs().maxCoeff() <= Scalar(opt.gradient_tol)) break;

      // Hessian of Tr(S L L) - 2 logdet L along unit directions E = e_r e_c^T:
      // Tr(S E_a E_b) + Tr(S E_b E_a) + 2 Tr(W E_a W E_b).
      Mat h(m, m);
      auto entry = [&](Eigen::Index r, Eigen::Index c, Eigen::Index r2,
                       Eigen::Index c2) {
        Scalar v = Scalar(2) * w(c2, r) * w(c, r2);
        if (c == r2) v += s(c2, r);
        if (c2 == r) v += s(c, r2);
        return v;
      };
      for (Eigen::Index a = 0; a < m; ++a) {
        const Var& va = vars[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b <= a; ++b) {
          const Var& vb = vars[static_cast<std::size_t>(b)];
          Scalar v = entry(va.i, va.j, vb.i, vb.j);
          if (vb.i != vb.j) v += entry(va.i, va.j, vb.j, vb.i);
          if (va.i != va.j) {
            v += entry(va.j, va.i, vb.i, vb.j);
            if (vb.i != vb.j) v += entry(va.j, va.i, vb.j, vb.i);
          }
          h(a, b) = v;
          h(b, a) = v;
        }
      }
      Eigen::LLT<Mat> hl(h);
      if (hl.info() != Eigen::Success) {
        out.message = "Hessian not positive definite";
        return out;
      }
      const Vector<Scalar> d = hl.solve(-g);
      const Scalar decrement = -g.dot(d);
      if (!(decrement > Scalar(0))) break;
      // Predicted decrease below the resolution of the objective.
      if (decrement <= Scalar(1e-15) * std::max<Scalar>(Scalar(1), std::abs(f)))
        break;

      Mat dx = Mat::Zero(p, p);
      for (Eigen::Index a = 0; a < m; ++a) {
        const Var& v = vars[static_cast<std::size_t>(a)];
        dx(v.i, v.j) = d(a);
        dx(v.j, v.i) = d(a);
      }
      Scalar t = 1;
      bool accepted = false;
      for (int k = 0; k <= opt.max_halvings; ++k, t /= Scalar(2)) {
        Mat trial = x + t * dx;
        // Project back onto the orthant fixed by the signs.
        for (std::size_t q = 0; q < pairs.size(); ++q) {
          const auto [i, j] = pairs[q];
          if (trial(i, j) * signs[q] < Scalar(0)) {
            trial(i, j) = Scalar(0);
            trial(j, i) = Scalar(0);
          }
        }
        Mat w_trial;
        const Scalar f_trial =
            detail::penalized_objective_or_inf(trial, s, lambda, &w_trial);
        Scalar predicted = 0;
        for (Eigen::Index a = 0; a < m; ++a) {
          const Var& v = vars[static_cast<std::size_t>(a)];
          predicted += g(a) * (trial(v.i, v.j) - x(v.i, v.j));
        }
        if (std::isfinite(f_trial) && f_trial <= f + Scalar(1e-4) * predicted) {
          x = std::move(trial);
          w = std::move(w_trial);
          f = f_trial;
          accepted = true;
          break;
        }
      }
      ++out.newton_iters;
      if (!accepted) break;
    }

    // Active-set update.
    const Mat g_full = s * x + x * s - Scalar(2) * w;
    bool changed = false;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> kept;
    std::vector<Scalar> kept_signs;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const auto [i, j] = pairs[q];
      if (x(i, j) * signs[q] > Scalar(0)) {
        kept.push_back(pairs[q]);
        kept_signs.push_back(signs[q]);
      } else {
        x(i, j) = Scalar(0);
        x(j, i) = Scalar(0);
        changed = true;
      }
    }
    const Scalar add_tol = lambda + Scalar(1e-10);
    Mat in_set = Mat::Zero(p, p);
    for (const auto& [i, j] : kept) in_set(i, j) = Scalar(1);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < j; ++i)
        if (in_set(i, j) == Scalar(0) && std::abs(g_full(i, j)) > add_tol) {
          kept.emplace_back(i, j);
          kept_signs.push_back(g_full(i, j) > Scalar(0) ? Scalar(-1) : Scalar(1));
          changed = true;
        }
    pairs = std::move(kept);
    signs = std::move(kept_signs);
    if (!changed) {
      out.estimate = x;
      out.ok = true;
      return out;
    }
  }
  out.estimate = x;
  out.ok = true;
  out.message = "active set still changing after the last round";
  return out;
}

}  // namespace lapnet
