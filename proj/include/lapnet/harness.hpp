#pragma once

// Experiment orchestration: configuration, seeded trials, lambda grid
// search, tau sweeps and the reference-table summary (table1).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lapnet/admm.hpp"
#include "lapnet/netmodel.hpp"

namespace lapnet {

struct NetworkSpec {
  /// er | ws | ba | grid | edge_list | reduced
  std::string kind = "er";
  /// Label used in result files; defaults to `kind`.
  std::string name;
  int p = 30;
  double edge_prob = 0.08;
  int ring_neighbors = 4;
  double rewire_prob = 0.05;
  int attach_count = 2;
  /// Edge-list file, or "bundled:<name>" for a file under data/networks.
  std::string path;
  /// adjacency (A + eps I) | grounded (Laplacian + shunt I) | reduced.
  std::string truth = "adjacency";
  double shunt = 0.5;
  /// Synthetic families: reuse one graph for every instance.
  bool fixed_graph = false;
  std::optional<std::pair<double, double>> weights;

  std::string label() const { return name.empty() ? kind : name; }
  bool synthetic() const;
};

struct ExperimentConfig {
  NetworkSpec network;
  double eps_margin = 0.5;
  /// 1 for the identity model.
  double theta_x_sigma2 = 1.0;
  bool theta_x_scalar = false;
  std::vector<double> tau_list;
  std::vector<double> lambda_grid;
  int n_instances = 40;
  SolverConfig solver;
  double threshold = 0.01;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "results";

  /// Sample count used instead of sample_size(tau, d, p); not part of the
  /// JSON schema.
  std::optional<int> fixed_samples;

  void validate() const;
};

std::vector<double> default_lambda_grid();

/// Parses the JSON experiment file. Relative edge-list paths resolve against
/// `base_dir` (the config file's directory).
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Canonical JSON echo of a config.
std::string experiment_config_json(const ExperimentConfig& cfg);

std::filesystem::path resolve_network_path(const std::string& path,
                                           const std::filesystem::path& base_dir = {});

/// Ground truth from a graph according to net_spec.truth.
GroundTruth make_ground_truth(const NetworkGraph& g, const NetworkSpec& net_spec,
                              double eps_margin);
/// Graph for `net_spec` (generated with `seed` or loaded).
NetworkGraph make_network(const NetworkSpec& net_spec, std::uint64_t seed);

struct TrialRecord {
  std::string network;
  int p = 0;
  int d = 0;
  double tau = 0.0;
  int n_samples = 0;
  double lambda = 0.0;
  int instance = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t seed = 0;
  double f_score = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double linf_offdiag = 0.0;
  double linf_full = 0.0;
  int iterations = 0;
  int newton_total = 0;
  bool converged = false;
  std::string status;
  double objective = 0.0;
  double kkt_violation = 0.0;
  std::string error;
  double wall_time_seconds = 0.0;
};

struct LambdaRow {
  double lambda = 0.0;
  double mean_f = 0.0;
  double std_f = 0.0;
  double mean_linf = 0.0;
  double std_linf = 0.0;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
  double max_kkt = 0.0;
  double mean_wall_time = 0.0;
};

struct LambdaSearchResult {
  double best_lambda = 0.0;
  double best_mean_f = 0.0;
  std::size_t best_index = 0;
  std::vector<LambdaRow> table;
};

struct SweepRow {
  std::string network;
  double tau = 0.0;
  int n_samples = 0;
  LambdaRow best;
};

struct Instance {
  NetworkGraph graph;
  GroundTruth truth;
  std::uint64_t graph_seed = 0;
};

/// A configured experiment with its instances materialized.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const std::vector<Instance>& instances() const { return instances_; }

  /// Sample count for (instance, tau index).
  int samples_for(int instance, std::size_t tau_index) const;

  /// One seeded trial. Solver failures are recorded, not thrown.
  TrialRecord run_trial(int instance, std::size_t tau_index,
                        std::size_t lambda_index) const;

  /// Every trial, ordered by (tau, lambda, instance) regardless of `jobs`.
  std::vector<TrialRecord> run_all(int jobs = 1) const;

 private:
  ExperimentConfig cfg_;
  std::vector<Instance> instances_;
};

/// Averages over instances per lambda and picks the best mean F-score (ties
/// go to the smaller lambda). `records` must all share one tau.
LambdaSearchResult lambda_search(const std::vector<TrialRecord>& records);

/// Best-lambda summary per tau.
std::vector<SweepRow> tau_sweep(const ExperimentConfig& cfg,
                                const std::vector<TrialRecord>& records);

std::string trials_csv(const std::vector<TrialRecord>& records);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string lambda_grid_csv(const ExperimentConfig& cfg,
                            const std::vector<TrialRecord>& records);

struct SweepOutputs {
  std::vector<TrialRecord> records;
  std::vector<SweepRow> rows;
};

/// Runs the experiment and writes trials.csv, lambda_grid.csv, sweep.csv and
/// manifest.json into cfg.out_dir.
SweepOutputs run_sweep(const ExperimentConfig& cfg, int jobs = 1);

// Reference-table summary (table1).

struct Table1Row {
  std::string network;
  int p = 0;
  double mean_d = 0.0;
  int n_samples = 0;
  double best_lambda = 0.0;
  double best_f = 0.0;
  double std_f = 0.0;
  double mean_linf = 0.0;
  double mean_iterations = 0.0;
  int max_iterations = 0;
  double converged_fraction = 0.0;
  double max_kkt = 0.0;
  double mean_wall_time = 0.0;
};

/// Names: small_world, erdos_renyi, scale_free, grid, ieee33, water.
std::vector<std::string> table1_networks();
/// Accepts the names above and the aliases ws, er, ba, ieee, power.
std::string table1_canonical_name(const std::string& name);
/// Experiment for one reference-table row at its fixed sample count.
ExperimentConfig table1_config(const std::string& network, int p,
                               int n_instances, std::uint64_t base_seed);
Table1Row table1_row(const ExperimentConfig& cfg,
                     const std::vector<TrialRecord>& records);
std::string table1_csv(const std::vector<Table1Row>& rows);

}  // namespace lapnet
