#include <doctest.h>

#include <cmath>

#include "lapnet/admm.hpp"
#include "lapnet/evalmetrics.hpp"
#include "lapnet/netmodel.hpp"
#include "lapnet/sampler.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lapnet;
using lapnet::test::random_matrix;
using lapnet::test::random_spd;
using lapnet::test::random_symmetric;
using lapnet::test::rel_frob;
using Eigen::MatrixXd;

namespace {

MatrixXd m1(double v) { return MatrixXd::Constant(1, 1, v); }

MatrixXd sampled_cov(std::uint64_t seed, int p, int n) {
  const GroundTruth t = grounded_laplacian(gen_erdos_renyi(p, 0.15, seed), 0.5);
  return sample_covariance(simulate_potentials(t, InjectionModel::identity(p), n, seed + 7));
}

}  // namespace

TEST_SUITE("admm") {

TEST_CASE("objective examples") {
  CHECK(objective(m1(1), m1(1), 0.0) == doctest::Approx(1.0));
  CHECK(objective(m1(2), m1(1), 0.0) == doctest::Approx(4 - 2 * std::log(2.0)));
  CHECK(objective(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2), 3.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(objective(m1(-1), m1(1), 0.0), NotPositiveDefinite);
}

TEST_CASE("objective agrees with the hand-expanded 2x2 formula") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix2d s = random_spd(rng, 2);
    const MatrixXd l = random_spd(rng, 2);
    const double lambda = rng.uniform(0.0, 1.0);
    CHECK(objective(l, MatrixXd(s), lambda) ==
          doctest::Approx(test::objective_2x2(s, lambda, l(0, 0), l(1, 1), l(0, 1))).epsilon(1e-12));
  }
}

TEST_CASE("closed_form_mle") {
  CHECK(closed_form_mle(MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3))
            .isApprox(MatrixXd::Identity(3, 3)));
  const MatrixXd s = Eigen::Vector2d(4, 9).asDiagonal();
  const MatrixXd l = closed_form_mle(s, MatrixXd::Identity(2, 2));
  CHECK(l(0, 0) == doctest::Approx(0.5));
  CHECK(l(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(l(0, 1)) < 1e-15);

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd sr = random_spd(rng, 10);
    const MatrixXd th = random_spd(rng, 10);
    const MatrixXd lh = closed_form_mle(sr, th);
    const MatrixXd thi = th.inverse();
    CHECK(rel_frob(lh * sr * lh, thi) <= 1e-9);
    CHECK(chol_or_min_eig(lh).positive_definite);
  }

  MatrixXd singular = MatrixXd::Zero(2, 2);
  singular(0, 0) = 1;
  CHECK_THROWS_AS(closed_form_mle(singular, MatrixXd::Identity(2, 2)), NotPositiveDefinite);
}

TEST_CASE("nare_residual") {
  CHECK(nare_residual(m1(0.5), m1(4), m1(2))(0, 0) == doctest::Approx(0.0));
  Rng rng(3);
  const MatrixXd st = random_spd(rng, 5);
  const MatrixXd l = std::sqrt(2.0) * spd_inv_sqrt(st);
  CHECK(nare_residual(l, st, MatrixXd::Zero(5, 5)).norm() <= 1e-12);

  // Duplicate evaluation with explicit loops.
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 6;
    const MatrixXd a = random_matrix(rng, p, p);
    const MatrixXd b = random_symmetric(rng, p);
    const MatrixXd c = random_symmetric(rng, p);
    const MatrixXd f = nare_residual(a, b, c);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        double v = (i == j) ? -2.0 : 0.0;
        for (int k = 0; k < p; ++k) {
          v += c(i, k) * a(k, j);
          for (int m = 0; m < p; ++m) v += a(i, k) * b(k, m) * a(m, j);
        }
        CHECK(f(i, j) == doctest::Approx(v).epsilon(1e-12));
      }
  }
}

TEST_CASE("nare_newton converges to the known roots") {
  SolverConfig cfg;
  const auto scalar = nare_newton_trace(m1(4), m1(2), m1(1), cfg);
  CHECK(scalar.estimate(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t t = 1; t < scalar.residual_norms.size(); ++t)
    CHECK(scalar.residual_norms[t] < scalar.residual_norms[t - 1]);

  Rng rng(4);
  for (int p : {3, 8}) {
    const MatrixXd st = random_spd(rng, p, 1.0);
    const MatrixXd l = nare_newton(st, MatrixXd::Zero(p, p), MatrixXd::Identity(p, p), cfg);
    CHECK(rel_frob(l, std::sqrt(2.0) * spd_inv_sqrt(st)) <= 1e-9);
    CHECK((l * st * l - 2.0 * MatrixXd::Identity(p, p)).norm() <= 1e-9);
  }
}

TEST_CASE("nare_newton on mid-run snapshots has a quadratic tail") {
  SolverConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto snap = test::admm_snapshot(seed, 20, 2 + static_cast<int>(seed), 0.1);
    const auto tr = nare_newton_trace(snap.s_tilde, snap.c, snap.l, cfg);
    const std::vector<double>& r = tr.residual_norms;
    CHECK(r.back() <= 1e-9);
    for (std::size_t t = 1; t < r.size(); ++t) CHECK(r[t] < r[t - 1]);
    CHECK(test::quadratic_tail(r, test::nare_roundoff(snap, tr.root)));
    CHECK(chol_or_min_eig(tr.estimate).positive_definite);
  }
}

TEST_CASE("nare_newton rejects a non-PD S~ and reports stalls") {
  SolverConfig cfg;
  CHECK_THROWS_AS(nare_newton(m1(-1), m1(0), m1(1), cfg), NotPositiveDefinite);
  cfg.max_newton_iters = 1;
  CHECK_THROWS_AS(nare_newton(m1(4), m1(2), m1(100), cfg), NewtonStalled);
}

TEST_CASE("exact primal step solves its subproblem") {
  Rng rng(5);
  const int p = 12;
  const MatrixXd s = sampled_cov(5, p, 60);
  const MatrixXd c = random_symmetric(rng, p) * 0.3;
  const double rho = 1.0;
  const auto step = exact_primal_step(s, c, rho, MatrixXd::Identity(p, p), 1e-11, 50, 20);
  const MatrixXd& l = step.L;
  REQUIRE(chol_or_min_eig(l).positive_definite);
  MatrixXd a = s;
  a.diagonal().array() += rho / 2;
  const MatrixXd g = a * l + l * a + c - 2.0 * l.inverse();
  CHECK(g.norm() <= 1e-9);
  CHECK((l - l.transpose()).norm() == 0.0);
}

TEST_CASE("dual_update examples") {
  SolverConfig cfg;
  Rng rng(6);
  const MatrixXd l = random_spd(rng, 4);
  const MatrixXd lam = random_symmetric(rng, 4);
  cfg.rho = 2.0;
  CHECK((dual_update(l, lam, cfg) - (l + lam / 2.0)).norm() <= 1e-15);

  cfg.rho = 1.0;
  cfg.lambda = 0.5;
  MatrixXd l2(2, 2);
  l2 << 1, 0.3, 0.3, 1;
  CHECK(dual_update(l2, MatrixXd::Zero(2, 2), cfg) == MatrixXd::Identity(2, 2));

  cfg.rho = 2.0;
  cfg.lambda = 1.0;
  CHECK(dual_update(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2), cfg) ==
        1.5 * MatrixXd::Identity(2, 2));
}

TEST_CASE("residuals examples") {
  SolverConfig cfg;
  AdmmState<double> st;
  st.L = MatrixXd::Identity(2, 2);
  st.Z = st.L;
  st.Lam = MatrixXd::Zero(2, 2);
  auto r = residuals(st, st.Z, cfg);
  CHECK(r.r == 0.0);
  CHECK(r.s == 0.0);
  CHECK(r.eps_pri == doctest::Approx(2 * cfg.eps_abs + cfg.eps_rel * std::sqrt(2.0)));
  CHECK(r.eps_dual == doctest::Approx(2 * cfg.eps_abs));
  st.Z = 0.9 * MatrixXd::Identity(2, 2);
  r = residuals(st, MatrixXd(st.Z), cfg);
  CHECK(r.r == doctest::Approx(0.1 * std::sqrt(2.0)));
}

TEST_CASE("admm_solve at S = I returns I") {
  for (double lambda : {0.0, 0.3, 1.0}) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    const auto rep = admm_solve(MatrixXd::Identity(5, 5), cfg);
    CHECK(rep.converged);
    CHECK((rep.estimate - MatrixXd::Identity(5, 5)).norm() <= 1e-8);
    CHECK(rep.kkt_violation <= 1e-8);
  }
}

TEST_CASE("lambda = 0 matches the closed form") {
  for (int p : {5, 10, 20}) {
    const MatrixXd s = sampled_cov(10 + static_cast<std::uint64_t>(p), p, 10 * p);
    SolverConfig cfg;
    const auto rep = admm_solve(s, cfg);
    REQUIRE(rep.converged);
    const MatrixXd ref = closed_form_mle(s, MatrixXd::Identity(p, p));
    CHECK(rel_frob(rep.estimate, ref) <= 1e-4);
    CHECK(rep.kkt_violation <= 1e-4);
  }
}

TEST_CASE("p = 2 agrees with a brute-force grid minimizer") {
  Eigen::Matrix2d s;
  s << 1, 0.5, 0.5, 2;
  for (double lambda : {0.1, 0.3}) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    const auto rep = admm_solve(MatrixXd(s), cfg);
    REQUIRE(rep.converged);
    const Eigen::Matrix2d ref = test::brute_force_2x2(s, lambda);
    CHECK((rep.estimate - MatrixXd(ref)).cwiseAbs().maxCoeff() <= 5e-3);
    CHECK(rep.kkt_violation <= 1e-4);
  }
}

TEST_CASE("kkt_violation examples") {
  CHECK(kkt_violation(MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3), 0.7) == 0.0);
  CHECK(kkt_violation(m1(0.5), m1(4), 0.0) == doctest::Approx(0.0));
  MatrixXd l(2, 2);
  l << 1, 0, 0, 1;
  MatrixXd s(2, 2);
  s << 1, 0.4, 0.4, 1;
  // G_12 = 0.8: inside the subgradient bound for lambda = 1, 0.3 above it for 0.5.
  CHECK(kkt_violation(l, s, 1.0) == doctest::Approx(0.0));
  CHECK(kkt_violation(l, s, 0.5) == doctest::Approx(0.3));
}

TEST_CASE("converged ER p=30 solve is certified") {
  const MatrixXd s = sampled_cov(30, 30, 85);
  SolverConfig cfg;
  cfg.lambda = 2.0 / 9.0;
  const auto rep = admm_solve(s, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.kkt_violation <= 1e-4);
  CHECK(rep.final_primal_residual <= rep.final_eps_pri);
  CHECK(rep.final_dual_residual <= rep.final_eps_dual);
  CHECK(rep.newton_iters_per_outer.size() == static_cast<std::size_t>(rep.iterations));
  CHECK(rep.final_objective == doctest::Approx(objective(rep.estimate, s, cfg.lambda)));
}

TEST_CASE("scalar injection rescaling") {
  const auto id = scalar_thetax_rescale(0.2, InjectionModel::identity(3));
  CHECK(id.sigma == 1.0);
  CHECK(id.lambda == 0.2);
  const auto r = scalar_thetax_rescale(0.2, InjectionModel::scalar(3, 4.0));
  CHECK(r.lambda == doctest::Approx(0.1));
  CHECK(r.back_map(MatrixXd::Identity(3, 3)).isApprox(0.5 * MatrixXd::Identity(3, 3)));
  CHECK_THROWS_AS(scalar_thetax_rescale(0.2, InjectionModel::general(2 * MatrixXd::Identity(3, 3))),
                  Unsupported);

  Rng rng(9);
  const MatrixXd s = random_spd(rng, 6);
  const MatrixXd ref = closed_form_mle(s, 4.0 * MatrixXd::Identity(6, 6));
  const MatrixXd k = closed_form_mle(s, MatrixXd::Identity(6, 6));
  CHECK(rel_frob(r.back_map(k), ref) <= 1e-10);

  SolverConfig cfg;
  const auto rep = admm_solve(s, cfg, InjectionModel::scalar(6, 4.0));
  REQUIRE(rep.converged);
  CHECK(rel_frob(rep.estimate, ref) <= 1e-4);
  CHECK(rep.kkt_violation <= 1e-4);

  cfg.lambda = 0.2;
  const auto pen = admm_solve(s, cfg, InjectionModel::scalar(6, 4.0));
  REQUIRE(pen.converged);
  CHECK(kkt_violation(pen.estimate, MatrixXd(4.0 * s), 0.2) <= 1e-4);
  CHECK_THROWS_AS(admm_solve(s, cfg, InjectionModel::general(random_spd(rng, 6))), Unsupported);
}

TEST_CASE("lambda = 0 with singular S is reported unbounded") {
  const MatrixXd s = sampled_cov(3, 10, 5);
  SolverConfig cfg;
  const auto rep = admm_solve(s, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.status == "unbounded");
  cfg.lambda = 0.3;
  const auto pen = admm_solve(s, cfg);
  CHECK(pen.converged);
  CHECK(chol_or_min_eig(pen.estimate).positive_definite);
}

TEST_CASE("support shrinks as lambda grows") {
  int pairs = 0, monotone = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const MatrixXd s = sampled_cov(40 + seed, 20, 60);
    std::size_t prev = 0;
    for (int k = 0; k <= 9; ++k) {
      SolverConfig cfg;
      cfg.lambda = k / 9.0;
      const auto rep = admm_solve(s, cfg);
      const std::size_t size = hard_threshold_support(rep.estimate, 0.01).size();
      if (k > 0) {
        ++pairs;
        if (size <= prev) ++monotone;
      }
      prev = size;
    }
  }
  CHECK(monotone >= 0.9 * pairs);
}

TEST_CASE("ADMM iterates keep Z and Lam symmetric and L positive definite") {
  const int p = 10;
  const MatrixXd s = sampled_cov(50, p, 40);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  MatrixXd l = MatrixXd::Identity(p, p), z = l, lam = MatrixXd::Zero(p, p);
  for (int k = 0; k < 15; ++k) {
    l = exact_primal_step(s, MatrixXd(lam - z), 1.0, l, 1e-10, 50, 20).L;
    z = dual_update(l, lam, cfg);
    lam = lam + (l - z);
    CHECK(chol_or_min_eig(l).positive_definite);
    CHECK((z - z.transpose()).norm() == 0.0);
    CHECK((lam - lam.transpose()).norm() == 0.0);
  }
}

TEST_CASE("NARE primal step runs to completion") {
  const MatrixXd s = sampled_cov(60, 8, 40);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.primal_step = PrimalStep::kNare;
  cfg.max_outer_iters = 300;
  const auto rep = admm_solve(s, cfg);
  CHECK(rep.iterations > 0);
  CHECK(chol_or_min_eig(rep.estimate).positive_definite);
  CHECK(std::isfinite(rep.kkt_violation));
}

TEST_CASE("Lam0 = I option and config validation") {
  const MatrixXd s = sampled_cov(70, 8, 40);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  const auto base = admm_solve(s, cfg);
  cfg.lambda0_identity = true;
  const auto alt = admm_solve(s, cfg);
  REQUIRE(base.converged);
  REQUIRE(alt.converged);
  CHECK((base.estimate - alt.estimate).cwiseAbs().maxCoeff() <= 1e-4);

  SolverConfig bad;
  bad.rho = 0.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = SolverConfig{};
  bad.lambda = -1.0;
  CHECK_THROWS_AS(admm_solve(s, bad), DataError);
  CHECK(primal_step_from_string("nare") == PrimalStep::kNare);
  CHECK(to_string(PrimalStep::kExact) == "exact");
  CHECK_THROWS_AS(primal_step_from_string("bogus"), DataError);
}

TEST_CASE("max_outer_iters without convergence is reported, not thrown") {
  const MatrixXd s = sampled_cov(80, 10, 40);
  SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.max_outer_iters = 2;
  const auto rep = admm_solve(s, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.status == "max_iterations");
  CHECK(rep.iterations == 2);
}

}  // TEST_SUITE
