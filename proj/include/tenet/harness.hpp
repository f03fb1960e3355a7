#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenet/bounds.hpp"
#include "tenet/grouping.hpp"
#include "tenet/model.hpp"
#include "tenet/solver.hpp"

namespace tenet {

// synthetic-data recipe: everything downstream is a pure function of
// (scenario, seed)
struct Scenario {
  int n = 100;
  int p = 10;
  int s = 2;
  double beta_value = 1.0;
  std::vector<int> support;         // empty: coordinates 0..s-1
  std::vector<double> beta_values;  // empty: beta_value on every support coordinate
  CovarianceKind covariance = CovarianceKind::Identity;
  double r = 0.0;
  int block_size = 2;
  NoiseSpec noise;
  SourceSpec source;
};

// Data are standardized after the noise enters, so the truth the fits chase
// is the raw coefficient vector mapped through the column scales. Both
// scales are kept.
struct Instance {
  Dataset data;
  Standardization transform;
  Vector beta_star_raw;
  Vector beta_star;   // standardized scale: x_scale[j] * beta_star_raw[j]
  Vector beta_tilde;  // standardized scale
  std::vector<int> support;
  double sigma = 0.0;
};

Instance build_instance(const Scenario& scenario, std::uint64_t seed);

// Lower is the certified default; UpperEstimate plugs the sampled cone
// quotient into the bound instead, for tightness studies only. Reports that
// used it are labeled non-certified.
enum class PhiChoice { Lower, UpperEstimate };

struct ExperimentConfig {
  Scenario scenario;
  std::vector<double> lambdas{0.1};
  std::vector<double> alphas{0.5};
  std::vector<double> rhos{0.5};
  double c = 1.0;
  int replications = 200;
  std::uint64_t seed = 1;
  SolverOptions solver;
  DConvention convention = DConvention::ProofConsistent;
  PhiChoice phi_choice = PhiChoice::Lower;
  int phi_samples = 300;  // UpperEstimate only
};

struct ReplicationRecord {
  std::uint64_t seed = 0;
  std::string method = "tenet";
  double lambda = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double error = 0.0;  // |beta_hat - beta_star|_2, standardized scale
  double bound = 0.0;
  double probability = 0.0;
  bool cone_member = false;
  double kkt_residual = 0.0;
  bool converged = false;  // not a CSV column; summaries skip non-converged fits
};

struct PointSummary {
  double lambda = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  int replications = 0;
  int converged = 0;
  int covered = 0;  // converged fits with error <= bound
  double probability = 0.0;
  double coverage = 0.0;
  double pass_band = 0.0;  // probability minus three binomial standard errors
  bool vacuous = false;
  bool pass = false;
};

struct Theorem1Result {
  std::vector<ReplicationRecord> records;
  std::vector<PointSummary> summaries;
  bool pass = false;
};

// one fresh instance per replication; the bound uses the instance's own
// conservative phi (smallest Gram eigenvalue)
Theorem1Result run_theorem1_experiment(const ExperimentConfig& config);

// fraction of converged fits whose error direction lies in the cone
double run_cone_membership_check(const ExperimentConfig& config);

// max |objective - augmented quadratic form| over random coefficient points
double augmented_objective_gap(const Dataset& data, const PenaltySpec& pen, const Vector& beta);
double run_augmented_identity_check(const ExperimentConfig& config, int n_points = 1000);

struct Prop1Summary {
  int grid_points = 0;
  int violations = 0;  // grid points with u_enet < u_tenet
  int inclusion_samples = 0;
  int inclusion_members = 0;     // samples inside the transfer cone
  int inclusion_violations = 0;  // members missing from the alpha = 1 cone
};
Prop1Summary run_prop1_experiment(const ExperimentConfig& config, int inclusion_samples = 10000);

struct Prop2Summary {
  int grid_points = 0;
  int condition_points = 0;
  int violations = 0;
};
Prop2Summary run_prop2_experiment(const ExperimentConfig& config);

struct Prop4Config {
  int p = 50;
  int s = 2;
  double alpha = 1.0;
  double rho = 1.0;
  double c = 0.5;
  CovarianceKind covariance = CovarianceKind::Identity;
  double r = 0.0;
  int block_size = 2;
  std::vector<int> n_grid{25, 50, 100, 200, 400};
  int seeds_per_n = 100;
  int samples_per_check = 500;
  double big_m = 1.0;
  std::uint64_t seed = 4;
};
struct Prop4Point {
  int n = 0;
  int successes = 0;
  int seeds = 0;
};
struct Prop4Summary {
  std::vector<Prop4Point> curve;
  double gamma = 0.0;
  double required_n = 0.0;        // sample size demanded by the universal constants
  double desk_scale_factor = 0.0; // required_n / largest n actually run
  bool monotone = false;          // success rate nondecreasing in n
};
Prop4Summary run_prop4_experiment(const Prop4Config& config);

struct GroupingConfig {
  Scenario scenario;  // target data; put the interesting pairs in one block
  double lambda = 0.05;
  double alpha = 0.5;
  double rho = 0.5;
  bool decoupled_variant = false;  // fit and bound with rho2 = 0
  int replications = 40;
  std::uint64_t seed = 7;
  // source pipeline: same design family and truth, separate sample
  bool fit_source = true;  // otherwise scenario.source builds beta_tilde
  int source_n = 400;
  double source_lambda = 0.05;
  double source_rho = 0.5;
  NoiseSpec source_noise{NoiseKind::Gaussian, 0.3};
  SolverOptions solver;
};
struct GroupingExperimentResult {
  std::vector<GroupingReport> target;  // one per within-block pair per converged fit
  std::vector<GroupingReport> source;  // source-fit differences against the source bound
  int qualifying = 0;
  int violations = 0;  // observed > bound + 1e-9 among qualifying pairs
  double max_excess = 0.0;
  int source_qualifying = 0;
  int source_violations = 0;
  int skipped_fits = 0;  // non-converged replications
};
GroupingExperimentResult run_grouping_experiment(const GroupingConfig& config);

std::string records_csv(const std::vector<ReplicationRecord>& records);
std::string grouping_csv(const std::vector<GroupingReport>& reports);

}  // namespace tenet
