#pragma once

// Dense matrix kernels shared by every other module: symmetric
// eigendecompositions, SPD square roots, Cholesky-based PD tests, Sylvester
// solves, entrywise shrinkage and the positive-definiteness safeguard.
//
// Everything here is a pure function templated on the Eigen expression type;
// results are plain Eigen matrices of the same scalar.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "lapnet/errors.hpp"

namespace lapnet {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A symmetric matrix. Symmetry is a contract enforced by the functions that
/// produce these values (they symmetrize their outputs exactly), not by the
/// storage type.
template <typename Scalar>
using SymMatrix = Matrix<Scalar>;

/// Eigenvalues in ascending order with an orthogonal matrix of eigenvectors.
template <typename Scalar>
struct EigDecomp {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;
};

template <typename Scalar>
struct PdCheck {
  bool positive_definite = false;
  Scalar min_eigenvalue = Scalar(0);
};

namespace detail {

template <typename Scalar>
constexpr Scalar kAbsFloor = Scalar(1e-14);

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw DataError(os.str());
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* who) {
  if (!m.allFinite()) throw DataError(std::string(who) + ": non-finite entry");
}

template <typename DA, typename DB>
void require_same_shape(const Eigen::MatrixBase<DA>& a,
                        const Eigen::MatrixBase<DB>& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << who << ": dimension mismatch " << a.rows() << "x" << a.cols()
       << " vs " << b.rows() << "x" << b.cols();
    throw DataError(os.str());
  }
}

/// Accepts matrices that are symmetric up to roundoff (relative 1e-10).
template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* who) {
  require_square(m, who);
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
  const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= Scalar(1e-10) * scale)) {
    std::ostringstream os;
    os << who << ": matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw DataError(os.str());
  }
}

}  // namespace detail

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

/// Largest |M_ij| over i != j; 0 for 1x1 matrices.
template <typename Derived>
typename Derived::Scalar max_abs_offdiag(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Scalar best(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) best = std::max<Scalar>(best, std::abs(m(i, j)));
  return best;
}

template <typename DA, typename DB>
Matrix<typename DA::Scalar> matmul(const Eigen::MatrixBase<DA>& a,
                                   const Eigen::MatrixBase<DB>& b) {
  if (a.cols() != b.rows()) throw DataError("matmul: inner dimension mismatch");
  return a * b;
}

/// (M + M^T) / 2, exactly symmetric.
template <typename Derived>
SymMatrix<typename Derived::Scalar> symmetrize(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  SymMatrix<Scalar> out = m;
  const Eigen::Index n = out.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Scalar v = (out(i, j) + out(j, i)) / Scalar(2);
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

template <typename Derived>
EigDecomp<typename Derived::Scalar> sym_eig(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "sym_eig");
  detail::require_finite(m, "sym_eig");
  detail::require_symmetric(m, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m.eval());
  if (es.info() != Eigen::Success) {
    const long max_iters =
        static_cast<long>(Eigen::SelfAdjointEigenSolver<Matrix<Scalar>>::m_maxIterations) *
        static_cast<long>(m.rows());
    std::ostringstream os;
    os << "sym_eig: QL iteration did not converge within " << max_iters
       << " iterations";
    throw EigenNonConvergence(os.str(), max_iters);
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Derived>
Vector<typename Derived::Scalar> sym_eigenvalues(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "sym_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m.eval(),
                                                   Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw EigenNonConvergence("sym_eigenvalues: QL iteration did not converge",
                              0);
  return es.eigenvalues();
}

/// Applies f to the spectrum of a symmetric matrix: V f(D) V^T.
template <typename Scalar, typename Fn>
SymMatrix<Scalar> spectral_map(const EigDecomp<Scalar>& eig, Fn f) {
  const Vector<Scalar> mapped = eig.values.unaryExpr(f);
  return symmetrize(eig.vectors * mapped.asDiagonal() *
                    eig.vectors.transpose());
}

namespace detail {

template <typename Scalar>
void require_pd_spectrum(const EigDecomp<Scalar>& eig, const char* who) {
  const Scalar lo = eig.values(0);
  if (!(lo > Scalar(0))) {
    std::ostringstream os;
    os << who << ": matrix is not positive definite (smallest eigenvalue "
       << lo << ")";
    throw NotPositiveDefinite(os.str(), static_cast<double>(lo));
  }
}

}  // namespace detail

/// Unique symmetric positive definite R with R R = M.
template <typename Derived>
SymMatrix<typename Derived::Scalar> spd_sqrt(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(m, "spd_sqrt");
  const auto eig = sym_eig(symmetrize(m));
  detail::require_pd_spectrum(eig, "spd_sqrt");
  return spectral_map(eig, [](Scalar v) { return std::sqrt(v); });
}

/// Inverse of spd_sqrt(M).
template <typename Derived>
SymMatrix<typename Derived::Scalar> spd_inv_sqrt(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_symmetric(m, "spd_inv_sqrt");
  const auto eig = sym_eig(symmetrize(m));
  detail::require_pd_spectrum(eig, "spd_inv_sqrt");
  return spectral_map(eig, [](Scalar v) { return Scalar(1) / std::sqrt(v); });
}

/// Plain Cholesky success test.
template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  Eigen::LLT<Matrix<Scalar>> llt(m.eval());
  return llt.info() == Eigen::Success;
}

/// PD flag from a full Cholesky factorization plus the smallest eigenvalue.
template <typename Derived>
PdCheck<typename Derived::Scalar> chol_or_min_eig(
    const Eigen::MatrixBase<Derived>& m) {
  detail::require_symmetric(m, "chol_or_min_eig");
  PdCheck<typename Derived::Scalar> out;
  out.positive_definite = is_positive_definite(m);
  out.min_eigenvalue = sym_eigenvalues(symmetrize(m))(0);
  return out;
}

/// Solves A X = B by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-13 of the largest one or the residual check fails.
template <typename DA, typename DB>
Matrix<typename DA::Scalar> lu_solve(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  detail::require_square(a, "lu_solve");
  if (b.rows() != a.rows()) throw DataError("lu_solve: right-hand side rows");
  Eigen::PartialPivLU<Matrix<Scalar>> lu(a.eval());
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const Scalar umax = diag.maxCoeff();
  if (!(diag.minCoeff() > Scalar(1e-13) * umax)) {
    throw SingularMatrix("lu_solve: matrix is singular to working precision");
  }
  Matrix<Scalar> x = lu.solve(b.eval());
  const Scalar res = (a * x - b).norm();
  const Scalar scale = a.norm() * x.norm() + b.norm();
  if (!(res <= Scalar(1e-11) * std::max(scale, detail::kAbsFloor<Scalar>))) {
    throw SingularMatrix("lu_solve: residual check failed (ill-conditioned)");
  }
  return x;
}

/// General inverse via LU; certified by the residual of A X = I.
template <typename Derived>
Matrix<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "inverse");
  return lu_solve(m, Matrix<Scalar>::Identity(m.rows(), m.cols()));
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
template <typename Derived>
SymMatrix<typename Derived::Scalar> spd_inverse(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "spd_inverse");
  Eigen::LLT<Matrix<Scalar>> llt(m.eval());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_inverse: Cholesky factorization failed",
                              std::numeric_limits<double>::quiet_NaN());
  }
  return symmetrize(llt.solve(Matrix<Scalar>::Identity(m.rows(), m.cols())));
}

/// Solves A H + H B = C with a complex Bartels-Stewart sweep: both
/// coefficients are reduced to upper-triangular Schur form, the triangular
/// equation is solved column by column and one step of iterative refinement
/// is applied.
template <typename DA, typename DB, typename DC>
Matrix<typename DA::Scalar> sylvester_solve(const Eigen::MatrixBase<DA>& a_in,
                                            const Eigen::MatrixBase<DB>& b_in,
                                            const Eigen::MatrixBase<DC>& c_in) {
  using Scalar = typename DA::Scalar;
  using Complex = std::complex<Scalar>;
  using CMatrix = Matrix<Complex>;
  detail::require_square(a_in, "sylvester_solve(A)");
  detail::require_square(b_in, "sylvester_solve(B)");
  if (c_in.rows() != a_in.rows() || c_in.cols() != b_in.rows())
    throw DataError("sylvester_solve: C must be rows(A) x rows(B)");
  const Matrix<Scalar> a = a_in;
  const Matrix<Scalar> b = b_in;
  const Matrix<Scalar> c = c_in;
  detail::require_finite(a, "sylvester_solve(A)");
  detail::require_finite(b, "sylvester_solve(B)");
  detail::require_finite(c, "sylvester_solve(C)");

  Eigen::ComplexSchur<Matrix<Scalar>> schur_a(a), schur_b(b);
  if (schur_a.info() != Eigen::Success || schur_b.info() != Eigen::Success)
    throw EigenNonConvergence("sylvester_solve: Schur reduction failed", 0);
  const CMatrix& ta = schur_a.matrixT();
  const CMatrix& ua = schur_a.matrixU();
  const CMatrix& tb = schur_b.matrixT();
  const CMatrix& ub = schur_b.matrixU();
  const Eigen::Index m = a.rows();
  const Eigen::Index n = b.rows();
  const Scalar pivot_floor =
      Scalar(1e-13) * std::max({a.norm(), b.norm(), detail::kAbsFloor<Scalar>});

  auto solve = [&](const Matrix<Scalar>& rhs) -> Matrix<Scalar> {
    const CMatrix f = ua.adjoint() * rhs.template cast<Complex>() * ub;
    CMatrix y = CMatrix::Zero(m, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Matrix<Complex, Eigen::Dynamic, 1> col = f.col(j);
      if (j > 0) col.noalias() -= y.leftCols(j) * tb.col(j).head(j);
      const Complex shift = tb(j, j);
      for (Eigen::Index i = m - 1; i >= 0; --i) {
        Complex acc = col(i);
        if (i + 1 < m) {
          acc -= (ta.row(i).segment(i + 1, m - i - 1) *
                  y.col(j).segment(i + 1, m - i - 1))
                     .value();
        }
        const Complex pivot = ta(i, i) + shift;
        if (!(std::abs(pivot) > pivot_floor)) {
          std::ostringstream os;
          os << "sylvester_solve: shifted system is singular (|pivot| = "
             << std::abs(pivot) << ")";
          throw SylvesterSingular(os.str(), static_cast<double>(std::abs(pivot)));
        }
        y(i, j) = acc / pivot;
      }
    }
    return (ua * y * ub.adjoint()).real();
  };

  Matrix<Scalar> h = solve(c);
  const Matrix<Scalar> residual = c - a * h - h * b;
  h += solve(residual);
  return h;
}

/// Scalar shrinkage sign(a) * max(|a| - b, 0).
template <typename Scalar>
Scalar soft(Scalar a, Scalar b) {
  if (a > b) return a - b;
  if (a < -b) return a + b;
  return Scalar(0);
}

/// Entrywise soft-thresholding. With `off_diagonal_only` the diagonal passes
/// through unchanged.
template <typename Derived>
SymMatrix<typename Derived::Scalar> soft_threshold(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar t,
    bool off_diagonal_only) {
  using Scalar = typename Derived::Scalar;
  if (!(t >= Scalar(0))) throw DataError("soft_threshold: threshold must be >= 0");
  SymMatrix<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out(i, j) = (off_diagonal_only && i == j) ? m(i, j) : soft(m(i, j), t);
  return out;
}

namespace detail {

/// Cholesky success with every pivot at least 1e-11 of the matrix scale.
template <typename Scalar>
bool safeguard_accepts(const Matrix<Scalar>& m) {
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) return false;
  const Scalar scale =
      std::max<Scalar>(Scalar(1), m.diagonal().cwiseAbs().maxCoeff());
  const Vector<Scalar> pivots =
      Matrix<Scalar>(llt.matrixL()).diagonal().cwiseAbs2();
  return pivots.minCoeff() >= Scalar(1e-11) * scale;
}

}  // namespace detail

/// (M + M^T)/2 + delta I with delta the first entry of
/// {0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6} that yields a well-pivoted Cholesky
/// factorization. The applied delta is written to `shift`.
template <typename Derived>
SymMatrix<typename Derived::Scalar> pd_safeguard(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar& shift) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "pd_safeguard");
  const SymMatrix<Scalar> sym = symmetrize(m);
  if (!sym.allFinite())
    throw SafeguardFailed("pd_safeguard: non-finite iterate",
                          std::numeric_limits<double>::quiet_NaN());
  constexpr std::array<double, 6> kSchedule{0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
  for (double delta : kSchedule) {
    SymMatrix<Scalar> candidate = sym;
    candidate.diagonal().array() += Scalar(delta);
    if (detail::safeguard_accepts(candidate)) {
      shift = Scalar(delta);
      return candidate;
    }
  }
  const Scalar lo = sym_eigenvalues(sym)(0);
  std::ostringstream os;
  os << "pd_safeguard: a diagonal shift of 1e-6 does not restore positive "
        "definiteness (smallest eigenvalue "
     << lo << ")";
  throw SafeguardFailed(os.str(), static_cast<double>(lo));
}

template <typename Derived>
SymMatrix<typename Derived::Scalar> pd_safeguard(
    const Eigen::MatrixBase<Derived>& m) {
  typename Derived::Scalar shift{};
  return pd_safeguard(m, shift);
}

}  // namespace lapnet
