// lapnet command-line interface.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapnet/admm.hpp"
#include "lapnet/errors.hpp"
#include "lapnet/evalmetrics.hpp"
#include "lapnet/harness.hpp"
#include "lapnet/io.hpp"
#include "lapnet/netmodel.hpp"
#include "lapnet/sampler.hpp"
#include "lapnet/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lapnet;

namespace {

struct GenerateArgs {
  std::string model = "er";
  int nodes = 30;
  double prob = 0.08;
  int k = 4;
  double beta = 0.05;
  int m = 2;
  std::uint64_t seed = 0;
  std::vector<double> weights;
  std::string out;
};

struct SimulateArgs {
  std::string graph;
  double eps_margin = 0.5;
  std::string truth = "adjacency";
  double shunt = 0.5;
  int samples = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  double sigma2 = 1.0;
  std::string cov_out;
  std::string truth_out;
  std::string data_out;
};

struct SolveArgs {
  std::string cov;
  SolverConfig solver;
  std::string primal_step = "exact";
  bool no_polish = false;
  double sigma2 = 1.0;
  std::string out;
  std::string report;
};

struct MleArgs {
  std::string cov;
  std::string theta_x;
  double sigma2 = 1.0;
  std::string out;
};

struct EvaluateArgs {
  std::string estimate;
  std::string truth;
  double threshold = 0.01;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::string out_dir;
  int jobs = 1;
};

struct Table1Args {
  std::string network = "all";
  int p = 30;
  int instances = 40;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  std::string out_dir = "results/table1";
};

void run_generate(const GenerateArgs& a) {
  NetworkSpec net_spec;
  net_spec.kind = a.model;
  net_spec.p = a.nodes;
  net_spec.edge_prob = a.prob;
  net_spec.ring_neighbors = a.k;
  net_spec.rewire_prob = a.beta;
  net_spec.attach_count = a.m;
  if (!net_spec.synthetic())
    throw DataError("generate: --model must be er, ws, ba or grid");
  if (!a.weights.empty()) {
    if (a.weights.size() != 2) throw DataError("generate: --weights takes LO HI");
    net_spec.weights = std::pair(a.weights[0], a.weights[1]);
  }
  const NetworkGraph g = make_network(net_spec, a.seed);
  write_edge_list(a.out, g);
  std::cout << "wrote " << a.out << ": " << g.node_count() << " nodes, "
            << g.edge_count() << " edges, max degree " << g.max_degree() << "\n";
}

void run_simulate(const SimulateArgs& a) {
  const NetworkGraph g = load_edge_list(a.graph);
  NetworkSpec net_spec;
  net_spec.truth = a.truth;
  net_spec.shunt = a.shunt;
  const GroundTruth truth = make_ground_truth(g, net_spec, a.eps_margin);
  const int p = static_cast<int>(truth.laplacian.rows());
  int n = a.samples;
  if (n <= 0) {
    if (!(a.tau > 0.0)) throw DataError("simulate: give --samples or --tau");
    n = sample_size(a.tau, std::max(1, truth.max_degree), p);
  }
  const InjectionModel inj =
      a.sigma2 == 1.0 ? InjectionModel::identity(p) : InjectionModel::scalar(p, a.sigma2);
  const DataMatrix y = simulate_potentials(truth, inj, n, a.seed);
  write_matrix_csv(a.cov_out, sample_covariance(y));
  if (!a.truth_out.empty()) write_matrix_csv(a.truth_out, truth.laplacian);
  if (!a.data_out.empty()) write_matrix_csv(a.data_out, y.transpose());
  std::cout << "wrote " << a.cov_out << ": p=" << p << ", N=" << n
            << ", d=" << truth.max_degree << "\n";
}

json report_json(const SolveReport<double>& r, const SolverConfig& cfg) {
  return {{"status", r.status},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"newton_iters_per_outer", r.newton_iters_per_outer},
          {"newton_total", r.newton_total()},
          {"inner_linear_iters", r.inner_linear_iters},
          {"final_primal_residual", r.final_primal_residual},
          {"final_dual_residual", r.final_dual_residual},
          {"eps_pri", r.final_eps_pri},
          {"eps_dual", r.final_eps_dual},
          {"final_objective", r.final_objective},
          {"kkt_violation", r.kkt_violation},
          {"estimate_source", r.estimate_source},
          {"polish_rounds", r.polish_rounds},
          {"wall_time", r.wall_time},
          {"primal_residuals", r.primal_residuals},
          {"dual_residuals", r.dual_residuals},
          {"objective_history", r.objective_history},
          {"config",
           {{"lambda", cfg.lambda},
            {"rho", cfg.rho},
            {"eps_abs", cfg.eps_abs},
            {"eps_rel", cfg.eps_rel},
            {"max_outer_iters", cfg.max_outer_iters},
            {"newton_tol", cfg.newton_tol},
            {"max_newton_iters", cfg.max_newton_iters},
            {"max_step_halvings", cfg.max_step_halvings},
            {"primal_step", to_string(cfg.primal_step)},
            {"polish", cfg.polish}}}};
}

int run_solve(SolveArgs a) {
  const Eigen::MatrixXd s = read_matrix_csv(a.cov);
  a.solver.primal_step = primal_step_from_string(a.primal_step);
  a.solver.polish = !a.no_polish;
  const int p = static_cast<int>(s.rows());
  const InjectionModel inj =
      a.sigma2 == 1.0 ? InjectionModel::identity(p) : InjectionModel::scalar(p, a.sigma2);
  const SolveReport<double> r = admm_solve(s, a.solver, inj);
  if (r.status == "unbounded")
    throw DataError("solve: lambda = 0 with a singular covariance has no minimizer");
  write_matrix_csv(a.out, r.estimate);
  if (!a.report.empty()) write_file_atomic(a.report, report_json(r, a.solver).dump(2) + "\n");
  std::cout << r.status << ": " << r.iterations << " iterations, kkt "
            << r.kkt_violation << ", objective " << format_double(r.final_objective)
            << "\n";
  return r.converged ? 0 : 2;
}

void run_mle(const MleArgs& a) {
  const Eigen::MatrixXd s = read_matrix_csv(a.cov);
  Eigen::MatrixXd theta;
  if (!a.theta_x.empty())
    theta = read_matrix_csv(a.theta_x);
  else
    theta = a.sigma2 * Eigen::MatrixXd::Identity(s.rows(), s.cols());
  write_matrix_csv(a.out, closed_form_mle(s, theta));
  std::cout << "wrote " << a.out << "\n";
}

void run_evaluate(const EvaluateArgs& a) {
  const Eigen::MatrixXd est = read_matrix_csv(a.estimate);
  const Eigen::MatrixXd truth = read_matrix_csv(a.truth);
  const GroundTruth t = ground_truth_from_matrix(truth);
  const ScoreCard sc = score(est, truth, t.support, a.threshold);
  const json j = {{"tp", sc.tp},
                  {"fp", sc.fp},
                  {"fn", sc.fn},
                  {"f_score", sc.f_score},
                  {"linf_offdiag", sc.linf_offdiag},
                  {"linf_full", sc.linf_full},
                  {"threshold", a.threshold}};
  if (!a.out.empty()) write_file_atomic(a.out, j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
}

void run_sweep_cmd(const SweepArgs& a) {
  ExperimentConfig cfg = load_experiment_config(a.config);
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  const SweepOutputs out = run_sweep(cfg, a.jobs);
  std::cout << sweep_csv(out.rows);
  std::cout << "wrote " << out.records.size() << " trials to " << cfg.out_dir.string()
            << "\n";
}

void run_table1(const Table1Args& a) {
  std::vector<std::string> names;
  if (a.network == "all")
    names = table1_networks();
  else
    names.push_back(table1_canonical_name(a.network));
  std::vector<Table1Row> rows;
  const fs::path dir(a.out_dir);
  for (const auto& name : names) {
    ExperimentConfig cfg = table1_config(name, a.p, a.instances, a.base_seed);
    cfg.out_dir = dir;
    const Experiment exp(cfg);
    const auto records = exp.run_all(a.jobs);
    write_file_atomic(dir / ("trials_" + name + ".csv"), trials_csv(records));
    write_file_atomic(dir / ("lambda_grid_" + name + ".csv"),
                      lambda_grid_csv(cfg, records));
    rows.push_back(table1_row(cfg, records));
  }
  const std::string csv = table1_csv(rows);
  write_file_atomic(dir / "table1.csv", csv);
  std::cout << csv;
}

void add_solver_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--lambda", a.solver.lambda, "l1 penalty weight")->required();
  cmd->add_option("--rho", a.solver.rho, "ADMM penalty parameter")->capture_default_str();
  cmd->add_option("--eps-abs", a.solver.eps_abs)->capture_default_str();
  cmd->add_option("--eps-rel", a.solver.eps_rel)->capture_default_str();
  cmd->add_option("--max-iter", a.solver.max_outer_iters, "outer iteration cap")
      ->capture_default_str();
  cmd->add_option("--newton-tol", a.solver.newton_tol)->capture_default_str();
  cmd->add_option("--max-newton", a.solver.max_newton_iters)->capture_default_str();
  cmd->add_option("--max-halvings", a.solver.max_step_halvings)->capture_default_str();
  cmd->add_option("--primal-step", a.primal_step, "exact | nare")
      ->check(CLI::IsMember({"exact", "nare"}))
      ->capture_default_str();
  cmd->add_flag("--no-polish", a.no_polish, "skip the active-set refinement");
  cmd->add_option("--sigma2", a.sigma2, "injection model Theta_x = sigma2 I")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse network structure learning from nodal potentials"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "generate a random network edge list");
  g->add_option("--model", gen.model, "er | ws | ba | grid")
      ->check(CLI::IsMember({"er", "ws", "ba", "grid"}))
      ->capture_default_str();
  g->add_option("--nodes", gen.nodes)->capture_default_str();
  g->add_option("--prob", gen.prob, "edge probability (er)")->capture_default_str();
  g->add_option("--k", gen.k, "ring neighbors (ws)")->capture_default_str();
  g->add_option("--beta", gen.beta, "rewiring probability (ws)")->capture_default_str();
  g->add_option("--m", gen.m, "attachments per node (ba)")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--weights", gen.weights, "uniform edge weights LO HI")->expected(2);
  g->add_option("--out", gen.out, "edge-list output")->required();

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "simulate potentials and their covariance");
  s->add_option("--graph", sim.graph, "edge-list file")->required()->check(CLI::ExistingFile);
  s->add_option("--eps-margin", sim.eps_margin)->capture_default_str();
  s->add_option("--truth", sim.truth, "adjacency | grounded | reduced")
      ->check(CLI::IsMember({"adjacency", "grounded", "reduced"}))
      ->capture_default_str();
  s->add_option("--shunt", sim.shunt, "shunt weight for --truth grounded")
      ->capture_default_str();
  auto* samples_opt = s->add_option("--samples", sim.samples, "sample count N");
  s->add_option("--tau", sim.tau, "rescaled sample size (N from d and p)")
      ->excludes(samples_opt);
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--sigma2", sim.sigma2)->capture_default_str();
  s->add_option("--cov-out", sim.cov_out, "sample covariance output")->required();
  s->add_option("--truth-out", sim.truth_out, "ground-truth matrix output");
  s->add_option("--data-out", sim.data_out, "samples output (N x p)");

  SolveArgs sol;
  auto* so = app.add_subcommand("solve", "solve the l1-regularized problem by ADMM");
  so->add_option("--cov", sol.cov, "sample covariance file")->required()->check(CLI::ExistingFile);
  add_solver_flags(so, sol);
  so->add_option("--out", sol.out, "estimate output")->required();
  so->add_option("--report", sol.report, "JSON solve report output");

  MleArgs mle;
  auto* ml = app.add_subcommand("mle", "closed-form unpenalized estimate");
  ml->add_option("--cov", mle.cov)->required()->check(CLI::ExistingFile);
  auto* theta_opt = ml->add_option("--theta-x", mle.theta_x, "Theta_x matrix file")
                        ->check(CLI::ExistingFile);
  ml->add_option("--sigma2", mle.sigma2, "Theta_x = sigma2 I")->excludes(theta_opt);
  ml->add_option("--out", mle.out)->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "score an estimate against the truth");
  e->add_option("--estimate", ev.estimate)->required()->check(CLI::ExistingFile);
  e->add_option("--truth", ev.truth)->required()->check(CLI::ExistingFile);
  e->add_option("--threshold", ev.threshold)->capture_default_str();
  e->add_option("--out", ev.out, "JSON score output");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "run a tau / lambda experiment from a config");
  w->add_option("--config", sw.config)->required()->check(CLI::ExistingFile);
  w->add_option("--out-dir", sw.out_dir, "overrides out_dir from the config");
  w->add_option("--jobs", sw.jobs, "worker threads")->capture_default_str();

  Table1Args t1;
  auto* t = app.add_subcommand("table1", "best-lambda summary at the reference sample sizes");
  t->add_option("--network", t1.network, "ws | er | ba | grid | ieee33 | water | all")
      ->capture_default_str();
  t->add_option("--p", t1.p, "nodes for the synthetic families")->capture_default_str();
  t->add_option("--instances", t1.instances)->capture_default_str();
  t->add_option("--base-seed", t1.base_seed)->capture_default_str();
  t->add_option("--jobs", t1.jobs)->capture_default_str();
  t->add_option("--out-dir", t1.out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (*g) run_generate(gen);
    if (*s) run_simulate(sim);
    if (*so) return run_solve(sol);
    if (*ml) run_mle(mle);
    if (*e) run_evaluate(ev);
    if (*w) run_sweep_cmd(sw);
    if (*t) run_table1(t1);
  } catch (const std::exception& ex) {
    std::cerr << "lapnet: error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
