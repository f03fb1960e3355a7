#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tenet/config.hpp"
#include "tenet/errors.hpp"
#include "tenet/harness.hpp"
#include "tenet/io.hpp"

using namespace tenet;

namespace {

Scenario small_scenario() {
  Scenario sc;
  sc.n = 50;
  sc.p = 6;
  sc.s = 2;
  sc.beta_value = 1.0;
  sc.noise.sigma = 0.4;
  return sc;
}

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.scenario = small_scenario();
  config.lambdas = {0.1, 0.4};
  config.alphas = {0.5};
  config.rhos = {0.3, 0.8};
  config.replications = 5;
  config.seed = 321;
  return config;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/tenet_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("build_instance is a pure function of scenario and seed") {
  const Scenario sc = small_scenario();
  const Instance a = build_instance(sc, 42);
  const Instance b = build_instance(sc, 42);
  const Instance c = build_instance(sc, 43);
  CHECK(a.data.X == b.data.X);
  CHECK(a.data.y == b.data.y);
  CHECK(a.beta_tilde == b.beta_tilde);
  CHECK(a.data.y != c.data.y);
}

TEST_CASE("build_instance standardizes and rescales the truth consistently") {
  Scenario sc = small_scenario();
  sc.support = {1, 4};
  sc.beta_values = {2.0, -1.5};
  const Instance inst = build_instance(sc, 77);
  CHECK(inst.data.standardization_error() < 1e-10);
  CHECK(inst.support == std::vector<int>{1, 4});
  CHECK(inst.beta_star_raw[1] == 2.0);
  CHECK(inst.beta_star_raw[4] == -1.5);
  CHECK(inst.beta_star_raw[0] == 0.0);
  for (int j = 0; j < 6; ++j)
    CHECK(inst.beta_star[j] ==
          doctest::Approx(inst.transform.x_scale[j] * inst.beta_star_raw[j]).epsilon(1e-14));
  CHECK(inst.sigma == 0.4);
}

TEST_CASE("build_instance validates support and beta_values") {
  Scenario sc = small_scenario();
  sc.support = {1, 9};  // out of range for p = 6
  CHECK_THROWS_AS(build_instance(sc, 1), ConfigError);
  sc.support = {1, 4};
  sc.beta_values = {1.0};  // length mismatch
  CHECK_THROWS_AS(build_instance(sc, 1), ConfigError);
}

TEST_CASE("theorem1 experiment produces a full grid with per-point summaries") {
  const ExperimentConfig config = small_config();
  const Theorem1Result res = run_theorem1_experiment(config);
  CHECK(res.summaries.size() == 4);  // 2 lambdas x 1 alpha x 2 rhos
  CHECK(res.records.size() == 20);
  for (const PointSummary& s : res.summaries) {
    CHECK(s.replications == 5);
    CHECK(s.converged == 5);
    CHECK(s.coverage >= 0.0);
    CHECK(s.coverage <= 1.0);
    CHECK(s.probability >= 0.0);
    CHECK(s.probability <= 1.0);
  }
  // within one grid point the certificate probability is a constant
  for (const ReplicationRecord& rec : res.records) {
    for (const PointSummary& s : res.summaries)
      if (rec.lambda == s.lambda && rec.rho == s.rho) CHECK(rec.probability == s.probability);
  }
}

TEST_CASE("augmented identity check stays at machine precision") {
  CHECK(run_augmented_identity_check(small_config(), 200) < 1e-9);
}

TEST_CASE("records_csv has the exact column set and deterministic formatting") {
  ReplicationRecord rec;
  rec.seed = 7;
  rec.method = "tenet";
  rec.lambda = 0.5;
  rec.alpha = 0.25;
  rec.rho = 0.1;
  rec.error = 0.125;
  rec.bound = 2.0;
  rec.probability = 1.0;
  rec.cone_member = true;
  rec.kkt_residual = 0.0;
  const std::string csv = records_csv({rec});
  CHECK(csv ==
        "seed,method,lambda,alpha,rho,error,bound,probability,cone_member,kkt_residual\n"
        "7,tenet,0.5,0.25,0.1,0.125,2,1,1,0\n");
}

TEST_CASE("grouping_csv has the exact column set") {
  GroupingReport rep;
  rep.j = 0;
  rep.k = 1;
  rep.r_jk = 0.5;
  rep.z = 2.0;
  rep.bound = 1.5;
  rep.observed = 0.25;
  rep.preconditions_met = false;
  const std::string csv = grouping_csv({rep});
  CHECK(csv ==
        "j,k,r_jk,Z,bound,observed,preconditions_met\n"
        "0,1,0.5,2,1.5,0.25,0\n");
}

TEST_CASE("format_double round-trips through strtod") {
  const double values[] = {0.1,  1.0 / 3.0, 1e-17, -2.5e300, 0.0,
                           42.0, 6.02e23,   -0.0,  1e308};
  for (const double v : values) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("read_matrix accepts headers, comments and mixed separators") {
  TempFile tmp("matrix.csv");
  write_text_file(tmp.path,
                  "# comment up front\n"
                  "alpha,beta,gamma\n"
                  "1.5, 2.0, 3.0\n"
                  "\n"
                  "4 5,6\n");
  const Matrix m = read_matrix(tmp.path);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(1, 2) == 6.0);
}

TEST_CASE("read_matrix rejects ragged rows and missing files") {
  TempFile tmp("ragged.csv");
  write_text_file(tmp.path, "1,2,3\n4,5\n");
  CHECK_THROWS_AS(read_matrix(tmp.path), ConfigError);
  CHECK_THROWS_AS(read_matrix("/nonexistent/nowhere.csv"), ConfigError);
}

TEST_CASE("read_vector reads one value per line") {
  TempFile tmp("vec.txt");
  write_text_file(tmp.path, "0.5\n-1.25\n3\n");
  const Vector v = read_vector(tmp.path);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.5);
  CHECK(v[1] == -1.25);
  CHECK(v[2] == 3.0);
}

TEST_CASE("parse_simulate_spec reads the full schema") {
  const std::string text = R"json({
    "scenario": {
      "n": 80, "p": 10, "s": 3, "beta_value": 0.7,
      "covariance": {"kind": "toeplitz", "r": 0.4},
      "noise": {"kind": "uniform", "sigma": 0.2},
      "source": {"kind": "sparse-shift", "k": 2, "magnitude": 0.1}
    },
    "lambda": [0.1, 0.2],
    "alpha": 0.5,
    "rho": [0.3],
    "c": 0.9,
    "replications": 12,
    "seed": 99,
    "solver": {"tol": 1e-9, "max_sweeps": 500, "order": "randomized", "seed": 5},
    "convention": "as-stated",
    "experiments": ["theorem1", "cone"],
    "augmented_points": 50,
    "inclusion_samples": 100
  })json";
  const SimulateSpec spec = parse_simulate_spec(text);
  CHECK(spec.config.scenario.n == 80);
  CHECK(spec.config.scenario.covariance == CovarianceKind::Toeplitz);
  CHECK(spec.config.scenario.r == 0.4);
  CHECK(spec.config.scenario.noise.kind == NoiseKind::Uniform);
  CHECK(spec.config.scenario.source.kind == SourceKind::SparseShift);
  CHECK(spec.config.scenario.source.k == 2);
  CHECK(spec.config.lambdas == std::vector<double>{0.1, 0.2});
  CHECK(spec.config.alphas == std::vector<double>{0.5});  // scalar promoted to a list
  CHECK(spec.config.c == 0.9);
  CHECK(spec.config.replications == 12);
  CHECK(spec.config.solver.tol == 1e-9);
  CHECK(spec.config.solver.order == SweepOrder::Randomized);
  CHECK(spec.config.convention == DConvention::AsStated);
  CHECK(spec.experiments == std::vector<std::string>{"theorem1", "cone"});
  CHECK(spec.augmented_points == 50);
  CHECK(spec.inclusion_samples == 100);
}

TEST_CASE("parse_simulate_spec rejects malformed input") {
  CHECK_THROWS_AS(parse_simulate_spec("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_simulate_spec(R"({"lambda": 0.1})"), ConfigError);  // no scenario
  CHECK_THROWS_AS(parse_simulate_spec(
                      R"({"scenario": {"n": 10, "p": 2, "covariance": {"kind": "banana"}}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_simulate_spec(
                      R"({"scenario": {"n": 10, "p": 2}, "experiments": ["theorem9"]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_simulate_spec(
                      R"({"scenario": {"n": 10, "p": 2}, "convention": "sideways"})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_simulate_spec(R"({"scenario": {"n": 10, "p": 2}, "lambda": []})"),
                  ConfigError);
}

TEST_CASE("parse_grouping_config reads its schema") {
  const std::string text = R"json({
    "scenario": {
      "n": 60, "p": 6,
      "support": [0, 1], "beta_values": [1.0, 1.0],
      "covariance": {"kind": "duplicated-block", "r": 0.99, "block_size": 2}
    },
    "lambda": 0.07, "alpha": 0.6, "rho": 0.4,
    "decoupled_variant": true,
    "replications": 9, "seed": 31,
    "source": {"fit": false, "n": 120, "lambda": 0.02, "rho": 0.3,
               "noise": {"kind": "gaussian", "sigma": 0.1}}
  })json";
  const GroupingConfig config = parse_grouping_config(text);
  CHECK(config.scenario.covariance == CovarianceKind::DuplicatedBlock);
  CHECK(config.lambda == 0.07);
  CHECK(config.alpha == 0.6);
  CHECK(config.rho == 0.4);
  CHECK(config.decoupled_variant);
  CHECK(config.replications == 9);
  CHECK(!config.fit_source);
  CHECK(config.source_n == 120);
  CHECK(config.source_lambda == 0.02);
  CHECK(config.source_noise.sigma == 0.1);
}

TEST_CASE("parse_simulate_spec reads the phi switch") {
  const std::string text = R"json({
    "scenario": {"n": 30, "p": 4},
    "phi": "upper-estimate",
    "phi_samples": 50
  })json";
  const SimulateSpec spec = parse_simulate_spec(text);
  CHECK(spec.config.phi_choice == PhiChoice::UpperEstimate);
  CHECK(spec.config.phi_samples == 50);
  CHECK(parse_simulate_spec(R"({"scenario": {"n": 30, "p": 4}})").config.phi_choice ==
        PhiChoice::Lower);
  CHECK_THROWS_AS(parse_simulate_spec(R"({"scenario": {"n": 30, "p": 4}, "phi": "middle"})"),
                  ConfigError);
}

TEST_CASE("the sampled-phi bound is at least as tight as the certified one") {
  ExperimentConfig lower = small_config();
  ExperimentConfig upper = lower;
  upper.phi_choice = PhiChoice::UpperEstimate;
  upper.phi_samples = 100;
  const Theorem1Result a = run_theorem1_experiment(lower);
  const Theorem1Result b = run_theorem1_experiment(upper);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == b.records[i].seed);  // same data either way
    CHECK(a.records[i].error == b.records[i].error);
    CHECK(b.records[i].bound <= a.records[i].bound + 1e-12);
  }
}

TEST_CASE("a tightness study is labeled and cannot fail the run") {
  SimulateSpec spec;
  spec.config = small_config();
  spec.config.phi_choice = PhiChoice::UpperEstimate;
  spec.experiments = {"theorem1"};
  const SimulateResult res = run_simulation(spec);
  CHECK(res.pass);  // regardless of coverage against the tighter bound
  CHECK(simulate_summary_json(res).find("upper-estimate (non-certified)") != std::string::npos);
}

TEST_CASE("run_simulation twice produces byte-identical outputs") {
  SimulateSpec spec;
  spec.config = small_config();
  spec.experiments = {"theorem1", "cone", "augmented"};
  spec.augmented_points = 100;
  const SimulateResult a = run_simulation(spec);
  const SimulateResult b = run_simulation(spec);
  CHECK(records_csv(a.theorem1.records) == records_csv(b.theorem1.records));
  CHECK(simulate_summary_json(a) == simulate_summary_json(b));
  CHECK(a.has_theorem1);
  CHECK(a.has_cone);
  CHECK(a.has_augmented);
  CHECK(!a.has_prop1);
}

TEST_CASE("grouping experiment counts pairs consistently") {
  GroupingConfig config;
  Scenario sc;
  sc.n = 80;
  sc.p = 6;
  sc.support = {0, 1};
  sc.beta_values = {1.0, 1.0};
  sc.covariance = CovarianceKind::DuplicatedBlock;
  sc.r = 0.99;
  sc.block_size = 2;
  sc.noise.sigma = 0.3;
  config.scenario = sc;
  config.replications = 4;
  config.seed = 12;
  config.source_n = 150;
  config.solver.tol = 1e-10;
  config.solver.max_sweeps = 50000;
  const GroupingExperimentResult res = run_grouping_experiment(config);
  // 3 within-block pairs per replication, minus skipped fits
  CHECK(res.target.size() ==
        static_cast<std::size_t>(3 * (config.replications - res.skipped_fits)));
  CHECK(res.qualifying >= res.violations);
  CHECK(res.source.size() == res.target.size());
  for (const GroupingReport& rep : res.source) CHECK(rep.preconditions_met);
  const std::string summary = grouping_summary_json(res);
  CHECK(summary.find("\"violations\"") != std::string::npos);
}
