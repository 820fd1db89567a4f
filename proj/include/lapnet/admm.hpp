#pragma once

// l1-regularized maximum-likelihood estimation of a sparse Laplacian-like
// matrix from a sample covariance S:
//
//   minimize  Tr(S L L) - 2 logdet L + lambda * sum_{i != j} |L_ij|
//
// over symmetric PD L, by ADMM on the splitting L = Z with the l1 term
// carried by Z. The closed-form minimizer for lambda = 0, the Riccati
// residual and its Newton solver, and a KKT certificate live here too.

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lapnet/errors.hpp"
#include "lapnet/matrixcore.hpp"
#include "lapnet/polish.hpp"
#include "lapnet/sampler.hpp"

namespace lapnet {

/// How the L-update of each ADMM iteration is computed.
enum class PrimalStep {
  /// Newton on the symmetric stationarity condition
  /// (S + rho/2 I) L + L (S + rho/2 I) + C - 2 L^{-1} = 0.
  kExact,
  /// Newton-Sylvester on the Riccati equation L S~ L + C L - 2I = 0,
  /// symmetrized and safeguarded.
  kNare,
};

std::string to_string(PrimalStep step);
PrimalStep primal_step_from_string(const std::string& name);

struct SolverConfig {
  double lambda = 0.0;
  double rho = 1.0;
  double eps_abs = 1e-5;
  double eps_rel = 1e-4;
  int max_outer_iters = 1000;
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  int max_step_halvings = 20;

  PrimalStep primal_step = PrimalStep::kExact;
  /// Start the multiplier at I instead of 0.
  bool lambda0_identity = false;
  /// Active-set Newton refinement of the final iterate.
  bool polish = true;

  /// Throws DataError on an invalid field.
  void validate() const;
};

template <typename Scalar>
struct AdmmState {
  SymMatrix<Scalar> L;
  SymMatrix<Scalar> Z;
  SymMatrix<Scalar> Lam;
  int iter = 0;
  std::vector<Scalar> primal_residuals;
  std::vector<Scalar> dual_residuals;
};

template <typename Scalar>
struct Residuals {
  Scalar r = 0;
  Scalar s = 0;
  Scalar eps_pri = 0;
  Scalar eps_dual = 0;

  bool converged() const { return r <= eps_pri && s <= eps_dual; }
};

template <typename Scalar>
struct SolveReport {
  SymMatrix<Scalar> estimate;
  int iterations = 0;
  bool converged = false;
  /// "converged", "max_iterations" or "unbounded".
  std::string status;
  std::vector<int> newton_iters_per_outer;
  long inner_linear_iters = 0;
  Scalar final_primal_residual = 0;
  Scalar final_dual_residual = 0;
  Scalar final_eps_pri = 0;
  Scalar final_eps_dual = 0;
  Scalar final_objective = 0;
  Scalar kkt_violation = 0;
  double wall_time = 0.0;
  std::vector<Scalar> primal_residuals;
  std::vector<Scalar> dual_residuals;
  std::vector<Scalar> objective_history;
  /// "polish", "Z" or "L".
  std::string estimate_source;
  int polish_rounds = 0;

  int newton_total() const {
    int total = 0;
    for (int n : newton_iters_per_outer) total += n;
    return total;
  }
};

namespace detail {

template <typename Derived>
void require_valid_covariance(const Eigen::MatrixBase<Derived>& s,
                              const char* who) {
  require_square(s, who);
  require_finite(s, who);
  require_symmetric(s, who);
}

/// Cholesky of a symmetric matrix, returning false instead of throwing.
template <typename Scalar>
bool spd_factor(const Matrix<Scalar>& m, Matrix<Scalar>* inv, Scalar* logdet) {
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) return false;
  const Vector<Scalar> d = Matrix<Scalar>(llt.matrixL()).diagonal();
  if (!(d.minCoeff() > Scalar(0)) || !d.allFinite()) return false;
  if (logdet != nullptr) *logdet = Scalar(2) * d.array().log().sum();
  if (inv != nullptr)
    *inv = symmetrize(llt.solve(Matrix<Scalar>::Identity(m.rows(), m.cols())));
  return true;
}

}  // namespace detail

/// Tr(S L L) - 2 logdet L + lambda * sum_{i != j} |L_ij|.
template <typename DL, typename DS>
typename DL::Scalar objective(const Eigen::MatrixBase<DL>& l_in,
                              const Eigen::MatrixBase<DS>& s_in,
                              typename DL::Scalar lambda) {
  using Scalar = typename DL::Scalar;
  detail::require_same_shape(l_in, s_in, "objective");
  const Matrix<Scalar> l = l_in;
  const Matrix<Scalar> s = s_in;
  Scalar logdet = 0;
  if (!detail::spd_factor<Scalar>(l, nullptr, &logdet)) {
    throw NotPositiveDefinite("objective: L is not positive definite",
                              static_cast<double>(sym_eigenvalues(symmetrize(l))(0)));
  }
  const Scalar tr = (s * l).cwiseProduct(l.transpose()).sum();
  const Scalar l1 = l.cwiseAbs().sum() - l.diagonal().cwiseAbs().sum();
  return tr - Scalar(2) * logdet + lambda * l1;
}

/// Unpenalized minimizer of Tr(S L Theta L) - 2 logdet L:
/// L = S^{-1/2} (S^{1/2} Theta^{-1} S^{1/2})^{1/2} S^{-1/2}.
template <typename DS, typename DT>
SymMatrix<typename DS::Scalar> closed_form_mle(
    const Eigen::MatrixBase<DS>& s_in, const Eigen::MatrixBase<DT>& theta_in) {
  using Scalar = typename DS::Scalar;
  detail::require_valid_covariance(s_in, "closed_form_mle(S)");
  detail::require_same_shape(s_in, theta_in, "closed_form_mle");
  const EigDecomp<Scalar> eig = sym_eig(s_in);
  if (!(eig.values(0) > Scalar(0))) {
    std::ostringstream os;
    os << "closed_form_mle: S is not positive definite (smallest eigenvalue "
       << eig.values(0)
       << "); the sample count is probably not larger than the dimension";
    throw NotPositiveDefinite(os.str(), static_cast<double>(eig.values(0)));
  }
  const SymMatrix<Scalar> s_half =
      spectral_map(eig, [](Scalar v) { return std::sqrt(v); });
  const SymMatrix<Scalar> s_inv_half =
      spectral_map(eig, [](Scalar v) { return Scalar(1) / std::sqrt(v); });
  const SymMatrix<Scalar> theta_inv = spd_inverse(symmetrize(theta_in));
  const SymMatrix<Scalar> middle = spd_sqrt(symmetrize(s_half * theta_inv * s_half));
  return symmetrize(s_inv_half * middle * s_inv_half);
}

/// F(L) = L S~ L + C L - 2I, exactly as written (no symmetrization).
template <typename DL, typename DT, typename DC>
Matrix<typename DL::Scalar> nare_residual(const Eigen::MatrixBase<DL>& l,
                                          const Eigen::MatrixBase<DT>& s_tilde,
                                          const Eigen::MatrixBase<DC>& c) {
  using Scalar = typename DL::Scalar;
  detail::require_square(l, "nare_residual(L)");
  detail::require_same_shape(l, s_tilde, "nare_residual");
  detail::require_same_shape(l, c, "nare_residual");
  Matrix<Scalar> f = l * s_tilde * l + c * l;
  f.diagonal().array() -= Scalar(2);
  return f;
}

template <typename Scalar>
struct NareNewtonResult {
  /// Last Newton iterate (not symmetrized).
  Matrix<Scalar> root;
  /// pd_safeguard(root).
  SymMatrix<Scalar> estimate;
  /// ||F||_F at every iterate, starting with L0.
  std::vector<Scalar> residual_norms;
  int iterations = 0;
  int halvings = 0;
};

/// Newton's method on F(L) = L S~ L + C L - 2I. Each step solves the
/// Sylvester system (C + L S~) H + H (S~ L) = -F(L) and halves H until
/// ||F|| decreases. Stops when ||F||_F <= newton_tol * max(1, ||2I||_F).
template <typename DT, typename DC, typename DL>
NareNewtonResult<typename DT::Scalar> nare_newton_trace(
    const Eigen::MatrixBase<DT>& s_tilde_in, const Eigen::MatrixBase<DC>& c_in,
    const Eigen::MatrixBase<DL>& l0, const SolverConfig& cfg) {
  using Scalar = typename DT::Scalar;
  const Matrix<Scalar> st = s_tilde_in;
  const Matrix<Scalar> c = c_in;
  detail::require_same_shape(st, c, "nare_newton");
  detail::require_same_shape(st, l0, "nare_newton");
  if (!is_positive_definite(st))
    throw NotPositiveDefinite("nare_newton: S~ is not positive definite",
                              static_cast<double>(sym_eigenvalues(symmetrize(st))(0)));
  const Scalar p = Scalar(st.rows());
  const Scalar tol =
      Scalar(cfg.newton_tol) * std::max<Scalar>(Scalar(1), Scalar(2) * std::sqrt(p));

  NareNewtonResult<Scalar> out;
  Matrix<Scalar> l = l0;
  Matrix<Scalar> f = nare_residual(l, st, c);
  Scalar fn = f.norm();
  out.residual_norms.push_back(fn);
  while (fn > tol) {
    if (out.iterations >= cfg.max_newton_iters) {
      std::ostringstream os;
      os << "nare_newton: no convergence in " << cfg.max_newton_iters
         << " iterations (||F|| = " << fn << ")";
      throw NewtonStalled(os.str(), static_cast<double>(fn));
    }
    Matrix<Scalar> h = sylvester_solve(c + l * st, st * l, (-f).eval());
    bool accepted = false;
    for (int k = 0; k <= cfg.max_step_halvings; ++k) {
      Matrix<Scalar> trial = l + h;
      Matrix<Scalar> f_trial = nare_residual(trial, st, c);
      const Scalar fn_trial = f_trial.norm();
      if (fn_trial < fn) {
        l = std::move(trial);
        f = std::move(f_trial);
        fn = fn_trial;
        accepted = true;
        break;
      }
      h /= Scalar(2);
      ++out.halvings;
    }
    ++out.iterations;
    if (!accepted) {
      std::ostringstream os;
      os << "nare_newton: step halving exhausted at ||F|| = " << fn;
      throw NewtonStalled(os.str(), static_cast<double>(fn));
    }
    out.residual_norms.push_back(fn);
  }
  out.root = l;
  out.estimate = pd_safeguard(l);
  return out;
}

template <typename DT, typename DC, typename DL>
SymMatrix<typename DT::Scalar> nare_newton(const Eigen::MatrixBase<DT>& s_tilde,
                                           const Eigen::MatrixBase<DC>& c,
                                           const Eigen::MatrixBase<DL>& l0,
                                           const SolverConfig& cfg) {
  return nare_newton_trace(s_tilde, c, l0, cfg).estimate;
}

template <typename Scalar>
struct ExactStepResult {
  SymMatrix<Scalar> L;
  int newton_iters = 0;
  long cg_iters = 0;
  Scalar gradient_norm = 0;
};

/// Minimizes Tr(S L L) + (rho/2) ||L||_F^2 + Tr(C L) - 2 logdet L over
/// symmetric PD L by Newton's method from `l0`. The gradient is
/// G(L) = A L + L A + C - 2 L^{-1} with A = S + (rho/2) I; the Newton system
/// A H + H A + 2 W H W = -G (W = L^{-1}) is solved by conjugate gradients
/// preconditioned with the Lyapunov operator of A + W^2. Steps are halved
/// until L stays PD and ||G|| decreases.
template <typename DS, typename DC, typename DL>
ExactStepResult<typename DS::Scalar> exact_primal_step(
    const Eigen::MatrixBase<DS>& s_in, const Eigen::MatrixBase<DC>& c_in,
    typename DS::Scalar rho, const Eigen::MatrixBase<DL>& l0,
    typename DS::Scalar tol, int max_newton_iters, int max_step_halvings) {
  using Scalar = typename DS::Scalar;
  using Mat = Matrix<Scalar>;
  const Eigen::Index p = s_in.rows();
  Mat a = s_in;
  a.diagonal().array() += rho / Scalar(2);
  const Mat c = c_in;

  ExactStepResult<Scalar> out;
  out.L = symmetrize(l0);
  Mat w;
  if (!detail::spd_factor<Scalar>(out.L, &w, nullptr))
    throw NotPositiveDefinite("exact_primal_step: start is not positive definite",
                              static_cast<double>(sym_eigenvalues(out.L)(0)));

  auto gradient = [&](const Mat& l, const Mat& winv) {
    Mat al = a * l;
    Mat g = al + al.transpose() + c - Scalar(2) * winv;
    return symmetrize(g);
  };

  Mat g = gradient(out.L, w);
  Scalar gn = g.norm();
  const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                       (Scalar(2) * a.norm() * out.L.norm() + c.norm() +
                        Scalar(2) * w.norm());
  const Scalar target = std::max(tol, floor);

  while (gn > target) {
    if (out.newton_iters >= max_newton_iters) {
      std::ostringstream os;
      os << "exact_primal_step: no convergence in " << max_newton_iters
         << " Newton iterations (||G|| = " << gn << ")";
      throw NewtonStalled(os.str(), static_cast<double>(gn));
    }
    // Preconditioner: (M X + X M)^{-1} with M = A + W^2.
    const EigDecomp<Scalar> eig = sym_eig(symmetrize((a + w * w).eval()));
    Mat denom(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < p; ++i)
        denom(i, j) = eig.values(i) + eig.values(j);
    auto precondition = [&](const Mat& r) {
      Mat t = eig.vectors.transpose() * r * eig.vectors;
      t.array() /= denom.array();
      return Mat(eig.vectors * t * eig.vectors.transpose());
    };
    auto apply = [&](const Mat& x) {
      Mat ax = a * x;
      return Mat(ax + ax.transpose() + Scalar(2) * w * x * w);
    };

    Mat h = Mat::Zero(p, p);
    Mat r = -g;
    Mat z = precondition(r);
    Mat dir = z;
    Scalar rz = r.cwiseProduct(z).sum();
    const Scalar cg_tol =
        std::max(Scalar(0.1) * gn * std::min<Scalar>(Scalar(1), gn),
                 Scalar(0.1) * target);
    const int max_cg = static_cast<int>(std::max<Eigen::Index>(50, p * (p + 1) / 2));
    for (int k = 0; k < max_cg; ++k) {
      const Mat ad = apply(dir);
      const Scalar curvature = dir.cwiseProduct(ad).sum();
      if (!(curvature > Scalar(0))) break;
      const Scalar alpha = rz / curvature;
      h += alpha * dir;
      r -= alpha * ad;
      ++out.cg_iters;
      if (r.norm() <= cg_tol) break;
      z = precondition(r);
      const Scalar rz_next = r.cwiseProduct(z).sum();
      dir = z + (rz_next / rz) * dir;
      rz = rz_next;
    }
    h = symmetrize(h);

    Scalar t = 1;
    bool accepted = false;
    for (int k = 0; k <= max_step_halvings; ++k, t /= Scalar(2)) {
      Mat trial = out.L + t * h;
      Mat w_trial;
      if (!detail::spd_factor<Scalar>(trial, &w_trial, nullptr)) continue;
      Mat g_trial = gradient(trial, w_trial);
      const Scalar gn_trial = g_trial.norm();
      if (gn_trial <= (Scalar(1) - Scalar(1e-4) * t) * gn) {
        out.L = std::move(trial);
        w = std::move(w_trial);
        g = std::move(g_trial);
        gn = gn_trial;
        accepted = true;
        break;
      }
    }
    ++out.newton_iters;
    if (!accepted) {
      std::ostringstream os;
      os << "exact_primal_step: step halving exhausted at ||G|| = " << gn;
      throw NewtonStalled(os.str(), static_cast<double>(gn));
    }
  }
  out.gradient_norm = gn;
  return out;
}

/// Z = soft(rho L + Lam, lambda) / rho with the diagonal passed through.
template <typename DL, typename DM>
SymMatrix<typename DL::Scalar> dual_update(const Eigen::MatrixBase<DL>& l,
                                           const Eigen::MatrixBase<DM>& lam,
                                           const SolverConfig& cfg) {
  using Scalar = typename DL::Scalar;
  detail::require_same_shape(l, lam, "dual_update");
  const Scalar rho = Scalar(cfg.rho);
  const Matrix<Scalar> v = rho * l + lam;
  return soft_threshold(v, Scalar(cfg.lambda), true) / rho;
}

/// r = ||L - Z||, s = ||rho (Z - Z_prev)||, with Boyd-style tolerances for
/// n = p^2 entries.
template <typename Scalar, typename DZ>
Residuals<Scalar> residuals(const AdmmState<Scalar>& state,
                            const Eigen::MatrixBase<DZ>& z_prev,
                            const SolverConfig& cfg) {
  const Scalar rho = Scalar(cfg.rho);
  const Scalar p = Scalar(state.L.rows());
  Residuals<Scalar> out;
  out.r = (state.L - state.Z).norm();
  out.s = rho * (state.Z - z_prev).norm();
  out.eps_pri = p * Scalar(cfg.eps_abs) +
                Scalar(cfg.eps_rel) * std::max(state.L.norm(), state.Z.norm());
  out.eps_dual = p * Scalar(cfg.eps_abs) + Scalar(cfg.eps_rel) * state.Lam.norm();
  return out;
}

/// Largest violation of the optimality conditions at L with
/// G = S L + L S - 2 L^{-1}: |G_ii| on the diagonal, |G_ij + lambda sign L_ij|
/// where L_ij != 0, max(0, |G_ij| - lambda) where L_ij = 0.
template <typename DL, typename DS>
typename DL::Scalar kkt_violation(const Eigen::MatrixBase<DL>& l_in,
                                  const Eigen::MatrixBase<DS>& s_in,
                                  typename DL::Scalar lambda) {
  using Scalar = typename DL::Scalar;
  detail::require_same_shape(l_in, s_in, "kkt_violation");
  const Matrix<Scalar> l = l_in;
  const Matrix<Scalar> s = s_in;
  Matrix<Scalar> w;
  if (!detail::spd_factor<Scalar>(l, &w, nullptr))
    throw NotPositiveDefinite("kkt_violation: L is not positive definite",
                              static_cast<double>(sym_eigenvalues(symmetrize(l))(0)));
  const Matrix<Scalar> g = s * l + l * s - Scalar(2) * w;
  Scalar worst = 0;
  const Eigen::Index p = l.rows();
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < p; ++i) {
      Scalar v;
      if (i == j)
        v = std::abs(g(i, i));
      else if (l(i, j) != Scalar(0))
        v = std::abs(g(i, j) + lambda * (l(i, j) > Scalar(0) ? Scalar(1) : Scalar(-1)));
      else
        v = std::max(Scalar(0), std::abs(g(i, j)) - lambda);
      worst = std::max(worst, v);
    }
  return worst;
}

/// Reduction of the Theta_x = sigma^2 I problem to Theta_x = I:
/// solve with (S, lambda / sigma) for K, then L = K / sigma.
template <typename Scalar>
struct RescaledProblem {
  Scalar lambda = 0;
  Scalar sigma = 1;

  template <typename Derived>
  SymMatrix<Scalar> back_map(const Eigen::MatrixBase<Derived>& k) const {
    return k / sigma;
  }
};

template <typename Scalar>
RescaledProblem<Scalar> scalar_thetax_rescale(Scalar lambda,
                                              const InjectionModel& inj) {
  if (!inj.is_scalar())
    throw Unsupported(
        "the ADMM solver supports only Theta_x = sigma^2 I; use "
        "closed_form_mle for a general Theta_x at lambda = 0");
  RescaledProblem<Scalar> out;
  out.sigma = std::sqrt(Scalar(inj.sigma2()));
  out.lambda = lambda / out.sigma;
  return out;
}

/// ADMM for the penalized problem with Theta_x = I. Z0 = I, Lam0 = 0 (or I),
/// the first Newton solve starts at I and later ones at the previous L.
template <typename DS>
SolveReport<typename DS::Scalar> admm_solve(const Eigen::MatrixBase<DS>& s_in,
                                            const SolverConfig& cfg) {
  using Scalar = typename DS::Scalar;
  using Mat = Matrix<Scalar>;
  cfg.validate();
  detail::require_valid_covariance(s_in, "admm_solve(S)");
  const auto clock_start = std::chrono::steady_clock::now();
  const Mat s = symmetrize(s_in);
  const Eigen::Index p = s.rows();
  const Scalar lambda = Scalar(cfg.lambda);
  const Scalar rho = Scalar(cfg.rho);

  SolveReport<Scalar> report;
  auto finish = [&](SolveReport<Scalar>& rep) {
    rep.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - clock_start)
                        .count();
    return rep;
  };

  if (lambda == Scalar(0)) {
    const Vector<Scalar> ev = sym_eigenvalues(s);
    const Scalar scale = std::max(ev.cwiseAbs().maxCoeff(), detail::kAbsFloor<Scalar>);
    if (ev(0) <= Scalar(1e-12) * scale) {
      report.status = "unbounded";
      report.estimate = Mat::Identity(p, p);
      report.estimate_source = "none";
      report.final_objective = std::numeric_limits<Scalar>::quiet_NaN();
      report.kkt_violation = std::numeric_limits<Scalar>::quiet_NaN();
      return finish(report);
    }
  }

  AdmmState<Scalar> st;
  st.L = Mat::Identity(p, p);
  st.Z = Mat::Identity(p, p);
  st.Lam = cfg.lambda0_identity ? Mat(Mat::Identity(p, p)) : Mat(Mat::Zero(p, p));
  Mat s_tilde = Scalar(2) * s;
  s_tilde.diagonal().array() += rho;
  Residuals<Scalar> res;
  Scalar r_prev = 1;
  Scalar s_prev = 1;

  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    const Mat c = st.Lam - rho * st.Z;
    if (cfg.primal_step == PrimalStep::kExact) {
      const Scalar inner_tol = std::max(Scalar(cfg.newton_tol),
                                        Scalar(1e-3) * std::min(r_prev, s_prev));
      auto step = exact_primal_step(s, c, rho, st.L, inner_tol,
                                    cfg.max_newton_iters, cfg.max_step_halvings);
      st.L = std::move(step.L);
      report.newton_iters_per_outer.push_back(step.newton_iters);
      report.inner_linear_iters += step.cg_iters;
    } else {
      if (!is_positive_definite(s_tilde))
        throw NotPositiveDefinite("admm_solve: 2S + rho I is not positive definite",
                                  static_cast<double>(sym_eigenvalues(s_tilde)(0)));
      auto step = nare_newton_trace(s_tilde, c, st.L, cfg);
      st.L = std::move(step.estimate);
      report.newton_iters_per_outer.push_back(step.iterations);
    }
    const Mat z_prev = st.Z;
    st.Z = dual_update(st.L, st.Lam, cfg);
    st.Lam = symmetrize((st.Lam + rho * (st.L - st.Z)).eval());
    st.iter = k + 1;
    res = residuals(st, z_prev, cfg);
    st.primal_residuals.push_back(res.r);
    st.dual_residuals.push_back(res.s);
    report.objective_history.push_back(objective(st.L, s, lambda));
    r_prev = res.r;
    s_prev = res.s;
    if (res.converged()) {
      report.converged = true;
      break;
    }
  }

  report.iterations = st.iter;
  report.status = report.converged ? "converged" : "max_iterations";
  report.final_primal_residual = res.r;
  report.final_dual_residual = res.s;
  report.final_eps_pri = res.eps_pri;
  report.final_eps_dual = res.eps_dual;
  report.primal_residuals = std::move(st.primal_residuals);
  report.dual_residuals = std::move(st.dual_residuals);

  // Candidate estimates: Z carries exact zeros; L is PD by construction.
  if (is_positive_definite(st.Z)) {
    report.estimate = st.Z;
    report.estimate_source = "Z";
  } else {
    report.estimate = st.L;
    report.estimate_source = "L";
  }
  report.kkt_violation = kkt_violation(report.estimate, s, lambda);

  if (cfg.polish && report.converged) {
    Mat start = st.L;
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < p; ++i)
        if (i != j && st.Z(i, j) == Scalar(0)) start(i, j) = Scalar(0);
    if (!is_positive_definite(start)) start = report.estimate;
    const auto pol = polish_active_set(s, lambda, start);
    report.polish_rounds = pol.rounds;
    if (pol.ok && is_positive_definite(pol.estimate)) {
      const Scalar kkt = kkt_violation(pol.estimate, s, lambda);
      if (kkt < report.kkt_violation) {
        report.estimate = pol.estimate;
        report.estimate_source = "polish";
        report.kkt_violation = kkt;
      }
    }
  }
  report.final_objective = objective(report.estimate, s, lambda);
  return finish(report);
}

/// ADMM with a scalar injection model Theta_x = sigma^2 I (Unsupported
/// otherwise), via scalar_thetax_rescale.
template <typename DS>
SolveReport<typename DS::Scalar> admm_solve(const Eigen::MatrixBase<DS>& s,
                                            const SolverConfig& cfg,
                                            const InjectionModel& inj) {
  using Scalar = typename DS::Scalar;
  if (inj.dim() != s.rows())
    throw DataError("admm_solve: Theta_x dimension does not match S");
  const auto map = scalar_thetax_rescale(Scalar(cfg.lambda), inj);
  if (map.sigma == Scalar(1)) return admm_solve(s, cfg);
  SolverConfig scaled = cfg;
  scaled.lambda = static_cast<double>(map.lambda);
  SolveReport<Scalar> rep = admm_solve(s, scaled);
  if (rep.status == "unbounded") return rep;
  rep.estimate = map.back_map(rep.estimate);
  // The certificate and objective refer to the original problem.
  const Matrix<Scalar> s_scaled = Scalar(inj.sigma2()) * s;
  rep.kkt_violation = kkt_violation(rep.estimate, s_scaled, Scalar(cfg.lambda));
  rep.final_objective = objective(rep.estimate, s_scaled, Scalar(cfg.lambda));
  return rep;
}

}  // namespace lapnet
